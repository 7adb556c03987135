//! `FOCKCOEF v1` coefficient files.
//!
//! ```text
//! FOCKCOEF 1 <M> <N>
//! <m> <n> <re> <im>      one line per nonzero entry, (m, n) ascending
//! ```
//! Doubles are printed in shortest round-trip form, so write → read is exact.

use std::io::{BufRead, BufReader, Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::CoeffField;
use crate::report::fmt_f64;

pub fn write_field<W: Write>(f: &CoeffField, mut w: W) -> Result<()> {
    writeln!(w, "FOCKCOEF 1 {} {}", f.m_max(), f.n_max())?;
    for (m, n, c) in f.nonzero() {
        writeln!(w, "{m} {n} {} {}", fmt_f64(c.re), fmt_f64(c.im))?;
    }
    Ok(())
}

pub fn to_string(f: &CoeffField) -> String {
    let mut buf = Vec::new();
    write_field(f, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii")
}

pub fn read_field<R: Read>(r: R) -> Result<CoeffField> {
    let mut lines = BufReader::new(r).lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty FOCKCOEF file".into()))??;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "FOCKCOEF" {
        return Err(Error::Format(format!("bad FOCKCOEF header `{header}`")));
    }
    if parts[1] != "1" {
        return Err(Error::Format(format!("unsupported FOCKCOEF version `{}`", parts[1])));
    }
    let dim = |s: &str| -> Result<usize> { s.parse().map_err(|_| Error::Format(format!("bad truncation `{s}`"))) };
    let (m_max, n_max) = (dim(parts[2])?, dim(parts[3])?);
    let mut f = CoeffField::zeros(m_max, n_max);
    for (i, line) in lines.enumerate() {
        let line = line?;
        let line_no = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 4 {
            return Err(Error::Format(format!("line {line_no}: expected `m n re im`")));
        }
        let idx = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Format(format!("line {line_no}: bad index `{s}`")))
        };
        let num = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::Format(format!("line {line_no}: bad number `{s}`")))?;
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("line {line_no}: `{s}`")));
            }
            Ok(v)
        };
        let (m, n) = (idx(cols[0])?, idx(cols[1])?);
        if m > m_max || n > n_max {
            return Err(Error::Format(format!("line {line_no}: index ({m}, {n}) outside ({m_max}, {n_max})")));
        }
        f.set(m, n, Complex64::new(num(cols[2])?, num(cols[3])?));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn writes_only_nonzero_entries() {
        let f = CoeffField::from_entries(1, 2, [(0, 0, Complex64::new(1.0, 0.0)), (1, 2, Complex64::new(-0.5, 1e-300))])
            .unwrap();
        assert_eq!(to_string(&f), "FOCKCOEF 1 1 2\n0 0 1 0\n1 2 -0.5 1e-300\n");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(read_field("".as_bytes()).is_err());
        assert!(read_field("FOCKCOEF 2 1 1\n".as_bytes()).is_err());
        assert!(read_field("FOCKCOEF 1 1 1\n2 0 1 0\n".as_bytes()).is_err());
        assert!(matches!(read_field("FOCKCOEF 1 1 1\n0 0 NaN 0\n".as_bytes()), Err(Error::NonFinite(_))));
        assert!(read_field("FOCKCOEF 1 1 1\n0 0 1\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(entries in prop::collection::vec((0usize..4, 0usize..6, any::<f64>(), any::<f64>()), 0..20)) {
            let entries: Vec<_> = entries
                .into_iter()
                .filter(|(_, _, re, im)| re.is_finite() && im.is_finite())
                .map(|(m, n, re, im)| (m, n, Complex64::new(re, im)))
                .collect();
            let f = CoeffField::from_entries(3, 5, entries).unwrap();
            let back = read_field(to_string(&f).as_bytes()).unwrap();
            for m in 0..=3 {
                for n in 0..=5 {
                    prop_assert_eq!(back.get(m, n), f.get(m, n));
                }
            }
        }
    }
}
