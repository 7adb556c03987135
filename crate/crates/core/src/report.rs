//! Line-oriented `key=value` records shared by every report type.

use num_complex::Complex64;

/// Shortest round-trip decimal; exponent form outside `[1e-5, 1e16)`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !a.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Complex value as `re+imi` with shortest round-trip decimals, e.g. `-2+3i`.
pub fn fmt_complex(c: Complex64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", fmt_f64(c.re), sign, fmt_f64(c.im.abs()))
}

/// Ordered fields under a versioned header.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Record {
    pub header: String,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(header: impl Into<String>) -> Self {
        Record { header: header.into(), fields: Vec::new() }
    }

    pub fn field(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    /// Float field in [`fmt_f64`] form.
    pub fn num(self, key: &str, value: f64) -> Self {
        self.field(key, fmt_f64(value))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// One `key=value` per line after a `# header` line.
    pub fn to_text(&self) -> String {
        let mut s = format!("# {}\n", self.header);
        for (k, v) in &self.fields {
            s.push_str(k);
            s.push('=');
            s.push_str(v);
            s.push('\n');
        }
        s
    }

    /// Single line: `header key=value key=value ...`.
    pub fn to_line(&self) -> String {
        let mut s = self.header.clone();
        for (k, v) in &self.fields {
            s.push(' ');
            s.push_str(k);
            s.push('=');
            s.push_str(v);
        }
        s
    }

    /// Inverse of [`Record::to_text`].
    pub fn parse_text(text: &str) -> Option<Record> {
        let mut lines = text.lines();
        let header = lines.next()?.strip_prefix("# ")?.to_string();
        let mut fields = Vec::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let (k, v) = line.split_once('=')?;
            fields.push((k.to_string(), v.to_string()));
        }
        Some(Record { header, fields })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_format() {
        assert_eq!(fmt_complex(Complex64::new(0.0, 0.0)), "0+0i");
        assert_eq!(fmt_complex(Complex64::new(-2.0, 3.0)), "-2+3i");
        assert_eq!(fmt_complex(Complex64::new(0.5, -0.25)), "0.5-0.25i");
        assert_eq!(fmt_f64(1e-300), "1e-300");
        assert_eq!(fmt_f64(-2.5e20), "-2.5e20");
        assert_eq!(fmt_f64(0.125), "0.125");
    }

    #[test]
    fn text_round_trip() {
        let r = Record::new("x v1").field("k", 2).field("ratio", 0.5);
        assert_eq!(r.to_text(), "# x v1\nk=2\nratio=0.5\n");
        assert_eq!(Record::parse_text(&r.to_text()), Some(r.clone()));
        assert_eq!(r.to_line(), "x v1 k=2 ratio=0.5");
    }
}
