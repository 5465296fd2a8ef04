//! Text output helpers: `%g`-style number formatting and the flat
//! `key = value` block used for reports and config files alike.

use crate::error::{Error, Result};

/// Formats `v` with `digits` significant digits, `%g` style: fixed notation
/// for moderate exponents, scientific otherwise, trailing zeros removed.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mant, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mant), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Full-precision form for data files.
pub fn fmt_data(v: f64) -> String {
    format_sig(v, 17)
}

/// Short form for human-readable summaries.
pub fn fmt_human(v: f64) -> String {
    format_sig(v, 6)
}

pub fn join_data(xs: &[f64]) -> String {
    xs.iter().map(|&v| fmt_data(v)).collect::<Vec<_>>().join(",")
}

/// Ordered list of `key = value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KvBlock {
    pub entries: Vec<(String, String)>,
}

impl KvBlock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn push_num(&mut self, key: impl Into<String>, v: f64) {
        self.push(key, fmt_human(v));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn extend(&mut self, other: KvBlock) {
        self.entries.extend(other.entries);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    /// Parses `key = value` lines; `#` starts a comment, blank lines skipped.
    pub fn parse(text: &str) -> Result<KvBlock> {
        let mut block = KvBlock::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                token: line.to_string(),
                msg: "expected `key = value`".into(),
            })?;
            let k = k.trim();
            if k.is_empty() {
                return Err(Error::Parse {
                    line: idx + 1,
                    token: line.to_string(),
                    msg: "empty key".into(),
                });
            }
            block.push(k, v.trim());
        }
        Ok(block)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.1, 6), "0.1");
        assert_eq!(format_sig(1.0 / 6.0, 6), "0.166667");
        assert_eq!(format_sig(1234567.0, 6), "1.23457e6");
        assert_eq!(format_sig(1e-5, 6), "1e-5");
        assert_eq!(format_sig(-2.5, 17), "-2.5");
        assert_eq!(format_sig(100.0, 3), "100");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [1.0 / 3.0, -1e-300, 6.02214076e23, 0.1 + 0.2, f64::MAX, 5e-324] {
            let s = fmt_data(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn kv_round_trip() {
        let mut b = KvBlock::new();
        b.push("rule", "opposing");
        b.push("alpha", "0.2");
        let parsed = KvBlock::parse(&format!("# header\n\n{}", b.render())).unwrap();
        assert_eq!(parsed, b);
        assert!(matches!(
            KvBlock::parse("alpha 0.2"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
