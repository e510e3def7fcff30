//! Line-oriented text format for measures.
//!
//! ```text
//! # comment
//! format=1                  (optional; must precede K)
//! K=<int>
//! counting: v0 v1 ... vK    (counting form, one line)
//! subset 1,2 mass 0.5       (Möbius form, one line per subset)
//! capacity 0x3 0.5          (dense form, one line per subset; unlisted subsets are 0)
//! ```
//!
//! Exactly one of the three forms may appear in a file. Subset labels are
//! 1-based; capacity bitmasks are hexadecimal with label `i` in bit `i-1`.

use std::fmt::Write as _;
use std::path::Path;

use super::{check_dense, Capacity, CountingProfile, MoebiusRepresentation};
use crate::error::{Error, Result};
use crate::labelset::{LabelSet, MAX_LABELS};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSource {
    Counting(CountingProfile),
    Moebius(MoebiusRepresentation),
    Capacity(Capacity),
}

impl MeasureSource {
    pub fn k(&self) -> usize {
        match self {
            MeasureSource::Counting(p) => p.k(),
            MeasureSource::Moebius(m) => m.k(),
            MeasureSource::Capacity(c) => c.k(),
        }
    }

    pub fn form_name(&self) -> &'static str {
        match self {
            MeasureSource::Counting(_) => "counting",
            MeasureSource::Moebius(_) => "subset",
            MeasureSource::Capacity(_) => "capacity",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Form {
    Counting,
    Subset,
    Capacity,
}

impl Form {
    fn keyword(self) -> &'static str {
        match self {
            Form::Counting => "counting",
            Form::Subset => "subset",
            Form::Capacity => "capacity",
        }
    }
}

pub fn read_measure_file(path: impl AsRef<Path>) -> Result<MeasureSource> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_measure(&text, &path.display().to_string())
}

/// Parses a measure file; `origin` names the source in error messages.
pub fn parse_measure(text: &str, origin: &str) -> Result<MeasureSource> {
    let err = |line: usize, msg: String| Error::parse(origin, line, msg);
    let mut k: Option<usize> = None;
    let mut form: Option<Form> = None;
    let mut counting: Option<Vec<f64>> = None;
    let mut subsets: Vec<(LabelSet, f64)> = Vec::new();
    let mut capacity: Vec<(usize, u64, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("format=") {
            if k.is_some() {
                return Err(err(line_no, "format= must precede K=".into()));
            }
            let version: u32 = rest
                .trim()
                .parse()
                .map_err(|_| err(line_no, format!("bad format version {rest:?}")))?;
            if version != FORMAT_VERSION {
                return Err(err(
                    line_no,
                    format!("unsupported format version {version}"),
                ));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("K=") {
            if k.is_some() {
                return Err(err(line_no, "duplicate K= header".into()));
            }
            let value: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(line_no, format!("bad label count {rest:?}")))?;
            if value == 0 || value > MAX_LABELS {
                return Err(err(line_no, format!("K must lie in 1..={MAX_LABELS}")));
            }
            k = Some(value);
            continue;
        }
        let k = k.ok_or_else(|| err(line_no, "missing K= header before data".into()))?;

        let this_form = if line.starts_with("counting:") {
            Form::Counting
        } else if line.starts_with("subset ") {
            Form::Subset
        } else if line.starts_with("capacity ") {
            Form::Capacity
        } else {
            return Err(err(line_no, format!("unrecognized line {line:?}")));
        };
        match form {
            Some(f) if f != this_form => {
                return Err(err(
                    line_no,
                    format!(
                        "mixed measure forms: '{}' after '{}'",
                        this_form.keyword(),
                        f.keyword()
                    ),
                ))
            }
            _ => form = Some(this_form),
        }

        match this_form {
            Form::Counting => {
                if counting.is_some() {
                    return Err(err(line_no, "more than one counting: line".into()));
                }
                let values = line["counting:".len()..]
                    .split_whitespace()
                    .map(|tok| parse_real(tok).map_err(|m| err(line_no, m)))
                    .collect::<Result<Vec<f64>>>()?;
                if values.len() != k + 1 {
                    return Err(err(
                        line_no,
                        format!(
                            "counting form needs K+1 = {} values, got {}",
                            k + 1,
                            values.len()
                        ),
                    ));
                }
                counting = Some(values);
            }
            Form::Subset => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 4 || toks[2] != "mass" {
                    return Err(err(
                        line_no,
                        "expected 'subset <labels> mass <real>'".into(),
                    ));
                }
                let labels = toks[1]
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| err(line_no, format!("bad label {t:?}")))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                let set =
                    LabelSet::from_labels(k, &labels).map_err(|e| err(line_no, e.to_string()))?;
                if subsets.iter().any(|(s, _)| *s == set) {
                    return Err(err(line_no, format!("duplicate subset {set}")));
                }
                let mass = parse_real(toks[3]).map_err(|m| err(line_no, m))?;
                subsets.push((set, mass));
            }
            Form::Capacity => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(err(
                        line_no,
                        "expected 'capacity <hex-bitmask> <real>'".into(),
                    ));
                }
                let hex = toks[1].trim_start_matches("0x").trim_start_matches("0X");
                let mask = u64::from_str_radix(hex, 16)
                    .map_err(|_| err(line_no, format!("bad hex bitmask {:?}", toks[1])))?;
                if !LabelSet(mask).fits(k) {
                    return Err(err(line_no, format!("bitmask {:#x} exceeds K={k}", mask)));
                }
                if capacity.iter().any(|(_, m, _)| *m == mask) {
                    return Err(err(line_no, format!("duplicate bitmask {:#x}", mask)));
                }
                let value = parse_real(toks[2]).map_err(|m| err(line_no, m))?;
                capacity.push((line_no, mask, value));
            }
        }
    }

    let k = k.ok_or_else(|| err(text.lines().count().max(1), "missing K= header".into()))?;
    match form {
        None => Err(err(text.lines().count().max(1), "no measure data".into())),
        Some(Form::Counting) => Ok(MeasureSource::Counting(CountingProfile::new(
            counting.expect("form implies data"),
        )?)),
        Some(Form::Subset) => Ok(MeasureSource::Moebius(MoebiusRepresentation::new(
            k, subsets,
        )?)),
        Some(Form::Capacity) => {
            check_dense(k)?;
            let mut values = vec![0.0; 1 << k];
            for (_, mask, value) in capacity {
                values[mask as usize] = value;
            }
            Ok(MeasureSource::Capacity(Capacity::from_values(k, values)?))
        }
    }
}

fn parse_real(tok: &str) -> std::result::Result<f64, String> {
    let x: f64 = tok.parse().map_err(|_| format!("bad number {tok:?}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("non-finite number {tok:?}"))
    }
}

fn header(k: usize) -> String {
    format!("format={FORMAT_VERSION}\nK={k}\n")
}

pub fn format_counting(profile: &CountingProfile) -> String {
    let mut out = header(profile.k());
    out.push_str("counting:");
    for v in profile.values() {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
    out
}

pub fn format_moebius(moeb: &MoebiusRepresentation) -> String {
    let mut out = header(moeb.k());
    for (set, mass) in moeb.masses() {
        let labels: Vec<String> = set.labels().map(|l| l.to_string()).collect();
        writeln!(out, "subset {} mass {mass}", labels.join(",")).unwrap();
    }
    out
}

pub fn format_capacity(cap: &Capacity) -> String {
    let mut out = header(cap.k());
    for (mask, value) in cap.values().iter().enumerate() {
        writeln!(out, "capacity {mask:#x} {value}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_counting_form() {
        let src = "# hamming\nformat=1\nK=3\ncounting: 0 0.3333333333 0.6666666667 1\n";
        match parse_measure(src, "t").unwrap() {
            MeasureSource::Counting(p) => assert_eq!(p.k(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_subset_form() {
        let src = "K=4\nsubset 1,2 mass 0.5\nsubset 3,4 mass 0.5\n";
        let MeasureSource::Moebius(m) = parse_measure(src, "t").unwrap() else {
            panic!("expected Möbius form")
        };
        assert_eq!(m.mass(LabelSet(0b0011)), 0.5);
        assert_eq!(m.mass(LabelSet(0b1100)), 0.5);
    }

    #[test]
    fn parses_capacity_form() {
        let src = "K=2\ncapacity 0x0 0\ncapacity 0x1 0.5\ncapacity 2 0.5\ncapacity 0x3 1\n";
        let MeasureSource::Capacity(c) = parse_measure(src, "t").unwrap() else {
            panic!("expected capacity form")
        };
        assert_eq!(c, Capacity::additive_uniform(2).unwrap());
    }

    #[test]
    fn rejects_mixed_forms() {
        let src = "K=2\nsubset 1 mass 0.5\ncapacity 0x3 1\n";
        match parse_measure(src, "m.txt") {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("mixed"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_line_numbers() {
        let cases = [
            ("subset 1 mass 1\n", 1),
            ("K=2\ncounting: 0 1\n", 2),
            ("K=2\n\nsubset 3 mass 1\n", 3),
            ("K=2\ncapacity zz 1\n", 2),
            ("K=2\nsubset 1 mass 0.5\nsubset 1 mass 0.5\n", 3),
            ("K=2\nfoo\n", 2),
            ("format=2\nK=2\n", 1),
            ("K=2\n", 1),
        ];
        for (src, expected) in cases {
            match parse_measure(src, "m") {
                Err(Error::Parse { line, .. }) => assert_eq!(line, expected, "{src:?}"),
                other => panic!("{src:?}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn domain_errors_are_not_parse_errors() {
        let err = parse_measure("K=3\ncounting: 0 0.6 0.5 1\n", "m").unwrap_err();
        assert!(err.is_validation());
    }

    #[test]
    fn formatting_round_trips() {
        let p = CountingProfile::binomial(5, 2).unwrap();
        assert_eq!(
            parse_measure(&format_counting(&p), "t").unwrap(),
            MeasureSource::Counting(p)
        );
        let c = Capacity::from_fn(3, |s| (s.len() as f64 / 3.0).powi(2)).unwrap();
        assert_eq!(
            parse_measure(&format_capacity(&c), "t").unwrap(),
            MeasureSource::Capacity(c)
        );
        let m = MoebiusRepresentation::new(3, [(LabelSet(0b011), 0.25), (LabelSet(0b110), 0.75)])
            .unwrap();
        let text = format_moebius(&m);
        assert_eq!(
            text,
            "format=1\nK=3\nsubset 1,2 mass 0.25\nsubset 2,3 mass 0.75\n"
        );
        assert_eq!(
            parse_measure(&text, "t").unwrap(),
            MeasureSource::Moebius(m)
        );
    }
}
