//! CSV curves and plain-text tables.

use probabs_core::rabin::{Convention, Report};

/// `x` with 12 significant digits, trailing zeros removed.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// CSV with header `T,pmin,pmax`.
pub fn curve_csv(rows: impl IntoIterator<Item = (u64, f64, f64)>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["T", "pmin", "pmax"]).unwrap();
    for (t, lo, hi) in rows {
        w.write_record([t.to_string(), sig12(lo), sig12(hi)]).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// Two-column CSV `state,value`.
pub fn values_csv(rows: impl IntoIterator<Item = (String, String)>, header: [&str; 2]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).unwrap();
    for (a, b) in rows {
        w.write_record([a, b]).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

pub fn convention_name(c: Convention) -> &'static str {
    match c {
        Convention::Step => "step",
        Convention::Sweep => "sweep",
    }
}

/// Expected-rounds table, one row per report.
pub fn rounds_table(reports: &[Report]) -> String {
    let mut out = format!("{:>3}  {:<10}{:>8}{:>10}{:>10}\n", "N", "convention", "states", "Rmin", "Rmax");
    for r in reports {
        out += &format!(
            "{:>3}  {:<10}{:>8}{:>10}{:>10}\n",
            r.tourists,
            convention_name(r.convention),
            r.states,
            r.rmin.to_string(),
            r.rmax.to_string()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(123456.0 + 1.0 / 3.0), "123456.333333");
        assert_eq!(sig12(0.0009765625), "0.0009765625");
    }

    #[test]
    fn csv_header() {
        assert_eq!(curve_csv([(0, 0.0, 0.5)]), "T,pmin,pmax\n0,0,0.5\n");
    }
}
