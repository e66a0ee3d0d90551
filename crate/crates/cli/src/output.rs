use std::fmt::Write as _;

use noma_core::experiments::{Axis, CopPoint, Quantity, SweepResult, ValidationReport};

pub const CSV_HEADER: &str = "axis,mode,exact,asymptotic,mc_estimate,mc_stderr,trials,feasible";

/// Ten significant digits, `%g`-style, always with a dot decimal separator.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

fn row(p: &CopPoint<f64>) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        fmt_sig(p.axis_value),
        p.label,
        fmt_sig(p.exact),
        opt(p.asymptotic),
        opt(p.mc_estimate),
        opt(p.mc_stderr),
        p.trials,
        p.feasible
    )
}

/// CSV of one or more sweeps, rows in sweep then grid order.
pub fn sweep_csv(results: &[SweepResult<f64>]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in results.iter().flat_map(|r| &r.rows) {
        out.push_str(&row(p));
        out.push('\n');
    }
    out
}

pub fn validation_csv(report: &ValidationReport<f64>) -> String {
    let mut out = String::from("snr_db,mode,analytic,mc_estimate,mc_stderr,tolerance,pass,considered\n");
    for p in &report.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_sig(p.snr_db),
            p.mode,
            fmt_sig(p.analytic),
            fmt_sig(p.mc),
            fmt_sig(p.stderr),
            fmt_sig(p.tolerance),
            p.pass,
            p.considered
        );
    }
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "'"))
}

/// Renderer-agnostic drawing commands for the CSV `data_file`.
pub fn plot_script(data_file: &str, title: &str, results: &[SweepResult<f64>]) -> String {
    let axis = results.first().map(|r| r.axis).unwrap_or(Axis::SnrDb);
    let quantity = results.first().map(|r| r.quantity).unwrap_or_default();
    let xlabel = match axis {
        Axis::SnrDb => "Transmit SNR (dB)",
        Axis::Theta => "theta",
        Axis::Rate => "Target rate (BPCU)",
    };
    let (ylabel, yscale) = match quantity {
        Quantity::Cop => ("Connection outage probability", "log"),
        Quantity::Throughput => ("Throughput (BPCU)", "linear"),
    };
    let mut out = String::new();
    let _ = writeln!(out, "# columns: {CSV_HEADER}");
    let _ = writeln!(out, "data {}", quote(data_file));
    let _ = writeln!(out, "title {}", quote(title));
    let _ = writeln!(out, "xlabel {}", quote(xlabel));
    let _ = writeln!(out, "ylabel {}", quote(ylabel));
    let _ = writeln!(out, "xscale linear");
    let _ = writeln!(out, "yscale {yscale}");
    let mut labels: Vec<&str> = Vec::new();
    for p in results.iter().flat_map(|r| &r.rows) {
        if !labels.contains(&p.label.as_str()) {
            labels.push(&p.label);
        }
    }
    let has_mc = results.iter().any(|r| r.rows.iter().any(|p| p.mc_estimate.is_some()));
    for label in labels {
        let _ = writeln!(out, "curve select={} x=axis y=exact style=solid", quote(label));
        let _ = writeln!(out, "curve select={} x=axis y=asymptotic style=dashed", quote(label));
        if has_mc {
            let _ = writeln!(out, "curve select={} x=axis y=mc_estimate err=mc_stderr style=markers", quote(label));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(5.0), "5");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(0.0011550007401682468), "0.00115500074");
        assert_eq!(fmt_sig(1.1819966461530901e-28), "1.181996646e-28");
        assert_eq!(fmt_sig(123456789012.0), "1.23456789e11");
        assert_eq!(fmt_sig(0.1 + 0.2), "0.3");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
    }
}
