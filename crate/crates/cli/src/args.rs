//! Value parsers for command-line arguments.

use dbar_core::exactpoly::parse_complex;
use dbar_core::{BiPoly, Complex64};

/// Order list from [`parse_orders`].
#[derive(Clone, Debug, PartialEq)]
pub struct Orders(pub Vec<u32>);

/// Constant list from [`parse_constants`].
#[derive(Clone, Debug, PartialEq)]
pub struct Constants(pub Vec<Complex64>);

pub fn parse_orders(s: &str) -> Result<Orders, String> {
    parse_k_range(s).map(Orders)
}

pub fn parse_constants(s: &str) -> Result<Constants, String> {
    parse_complex_list(s).map(Constants)
}

/// Largest derivative order accepted on the command line.
pub const MAX_K: u32 = 16;

/// `3`, `1..4` (inclusive) or `1,2,4`.
pub fn parse_k_range(s: &str) -> Result<Vec<u32>, String> {
    let one = |t: &str| -> Result<u32, String> {
        let k: u32 = t.trim().parse().map_err(|_| format!("invalid order `{t}`"))?;
        if !(1..=MAX_K).contains(&k) {
            return Err(format!("order must be in 1..={MAX_K}, got {k}"));
        }
        Ok(k)
    };
    let ks: Vec<u32> = if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (one(lo)?, one(hi)?);
        if lo > hi {
            return Err(format!("empty order range `{s}`"));
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(one).collect::<Result<_, _>>()?
    };
    Ok(ks)
}

pub fn parse_order(s: &str) -> Result<u32, String> {
    match parse_k_range(s)?.as_slice() {
        [k] => Ok(*k),
        _ => Err(format!("expected a single order, got `{s}`")),
    }
}

/// Complex literal such as `-2+3i`, `10i`, `1/2`.
pub fn parse_complex_arg(s: &str) -> Result<Complex64, String> {
    let c = parse_complex(s).map_err(|e| e.to_string())?;
    let v = c.to_complex64();
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(format!("constant `{s}` is not finite"));
    }
    Ok(v)
}

/// Comma-separated complex literals; at least one.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>, String> {
    if s.trim().is_empty() {
        return Err("the constant list is empty".into());
    }
    s.split(',').map(parse_complex_arg).collect()
}

pub fn parse_poly_arg(s: &str) -> Result<BiPoly, String> {
    s.parse::<BiPoly>().map_err(|e| e.to_string())
}

/// Comma-separated finite floats, exactly `n` of them.
pub fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("invalid number `{t}`")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", v.len()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(format!("non-finite value in `{s}`"));
    }
    Ok(v)
}

pub fn parse_disk(s: &str) -> Result<[f64; 3], String> {
    let v = parse_floats(s, 3)?;
    Ok([v[0], v[1], v[2]])
}

pub fn parse_rect(s: &str) -> Result<[f64; 4], String> {
    let v = parse_floats(s, 4)?;
    Ok([v[0], v[1], v[2], v[3]])
}

pub fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("invalid number `{s}`"))?;
    if !v.is_finite() || v <= 0.0 {
        return Err(format!("expected a positive number, got `{s}`"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_ranges() {
        assert_eq!(parse_k_range("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_k_range("2").unwrap(), vec![2]);
        assert_eq!(parse_k_range("1,2,4").unwrap(), vec![1, 2, 4]);
        assert!(parse_k_range("0").is_err());
        assert!(parse_k_range("3..1").is_err());
        assert!(parse_k_range("0..2").is_err());
        assert!(parse_k_range("17").is_err());
        assert!(parse_order("1..2").is_err());
    }

    #[test]
    fn complex_lists() {
        let v = parse_complex_list("0,1,-2+3i,10i,100").unwrap();
        assert_eq!(v[2], Complex64::new(-2.0, 3.0));
        assert_eq!(v[3], Complex64::new(0.0, 10.0));
        assert!(parse_complex_list("").is_err());
        assert!(parse_complex_list("1,z").is_err());
    }

    #[test]
    fn shapes() {
        assert_eq!(parse_disk("0,0,1").unwrap(), [0.0, 0.0, 1.0]);
        assert!(parse_disk("0,0").is_err());
        assert!(parse_rect("0,0,1,nan").is_err());
        assert!(parse_positive("-1").is_err());
        assert_eq!(parse_positive("0.25").unwrap(), 0.25);
    }
}
