//! CSV and JSON renderings shared by the CLI and the web demo.
//!
//! Floating-point values are written with 17 significant digits in both
//! formats so they round-trip exactly.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::consensus::{MarginResult, RegionReport};
use crate::sim::{SimConfig, Trajectory};
use crate::spectra::{cassini_ovals, cassini_residual, Sign, SpectrumReport, SpectrumSource};
use crate::topology::Topology;

/// `{:.16e}`: one digit before the point, sixteen after.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// Serializes an `f64` as a JSON number in [`fmt_num`] form; non-finite
/// values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sci(pub f64);

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt_num(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn spectrum_csv(report: &SpectrumReport) -> String {
    let mut out = String::from("re,im,cassini_residual\n");
    for (z, r) in report.eigenvalues.iter().zip(report.locus_residuals()) {
        out.push_str(&format!("{},{},{}\n", fmt_num(z.re), fmt_num(z.im), fmt_num(r)));
    }
    out
}

#[derive(Serialize)]
struct EigenRow {
    re: Sci,
    im: Sci,
    cassini_residual: Sci,
}

#[derive(Serialize)]
struct SpectrumJson {
    topology: Topology,
    sign: Sign,
    source: SpectrumSource,
    max_cassini_residual: Option<Sci>,
    eigenvalues: Vec<EigenRow>,
}

pub fn spectrum_json(report: &SpectrumReport) -> String {
    to_json(&SpectrumJson {
        topology: report.topology,
        sign: report.sign,
        source: report.source,
        max_cassini_residual: report.max_cassini_residual.map(Sci),
        eigenvalues: report
            .eigenvalues
            .iter()
            .zip(report.locus_residuals())
            .map(|(z, r)| EigenRow { re: Sci(z.re), im: Sci(z.im), cassini_residual: Sci(r) })
            .collect(),
    })
}

/// Both ovals sampled at `samples` angles: one row per angle.
pub fn cassini_csv(sign: Sign, samples: usize) -> String {
    let (outer, inner) = cassini_ovals(sign, samples);
    let mut out = String::from("theta,outer_re,outer_im,inner_re,inner_im,max_residual\n");
    for (i, (o, n)) in outer.iter().zip(&inner).enumerate() {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / samples as f64;
        let res = cassini_residual(*o, sign).max(cassini_residual(*n, sign));
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_num(theta),
            fmt_num(o.re),
            fmt_num(o.im),
            fmt_num(n.re),
            fmt_num(n.im),
            fmt_num(res)
        ));
    }
    out
}

pub fn region_csv(r: &RegionReport) -> String {
    format!(
        "topology,n,gamma,theorem,criterion,max_re\n{},{},{},{},{},{}\n",
        r.topology,
        r.n,
        fmt_num(r.gamma),
        r.size_free,
        r.criterion,
        fmt_num(r.max_re)
    )
}

#[derive(Serialize)]
struct RegionJson {
    topology: Topology,
    n: usize,
    gamma: Sci,
    theorem: bool,
    criterion: bool,
    max_re: Sci,
}

pub fn region_json(r: &RegionReport) -> String {
    to_json(&RegionJson {
        topology: r.topology,
        n: r.n,
        gamma: Sci(r.gamma),
        theorem: r.size_free,
        criterion: r.criterion,
        max_re: Sci(r.max_re),
    })
}

pub fn margin_csv(rows: &[MarginResult]) -> String {
    let mut out = String::from("n,gamma_star,max_re_at_star,iterations\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            fmt_num(r.gamma_star),
            fmt_num(r.max_re_at_star),
            r.iterations
        ));
    }
    out
}

#[derive(Serialize)]
struct MarginJson {
    topology: Topology,
    n: usize,
    gamma_star: Sci,
    bracket_width: Sci,
    max_re_at_star: Sci,
    local_slope: Sci,
    iterations: usize,
    all_gamma: bool,
}

pub fn margin_json(rows: &[MarginResult]) -> String {
    let rows: Vec<_> = rows
        .iter()
        .map(|r| MarginJson {
            topology: r.topology,
            n: r.n,
            gamma_star: Sci(r.gamma_star),
            bracket_width: Sci(r.bracket_width),
            max_re_at_star: Sci(r.max_re_at_star),
            local_slope: Sci(r.local_slope),
            iterations: r.iterations,
            all_gamma: r.all_gamma,
        })
        .collect();
    to_json(&rows)
}

/// `t,disagreement,x_1,…,x_n`, plus `v_1,…,v_n` when `full_state` is set.
pub fn trajectory_csv(traj: &Trajectory, full_state: bool) -> String {
    let n = traj.n;
    let mut header = vec!["t".to_string(), "disagreement".to_string()];
    header.extend((1..=n).map(|i| format!("x_{i}")));
    if full_state {
        header.extend((1..=n).map(|i| format!("v_{i}")));
    }
    let mut out = header.join(",");
    out.push('\n');
    for ((t, d), s) in traj.times.iter().zip(&traj.disagreement).zip(&traj.states) {
        let mut row = vec![fmt_num(*t), fmt_num(*d)];
        row.extend((0..n).map(|i| fmt_num(s[2 * i])));
        if full_state {
            row.extend((0..n).map(|i| fmt_num(s[2 * i + 1])));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct ConfigJson {
    topology: Topology,
    n: usize,
    gamma: Sci,
    dt: Sci,
    horizon: Sci,
    seed: u64,
    init_low: Sci,
    init_high: Sci,
    zero_velocity: bool,
    record_stride: usize,
}

#[derive(Serialize)]
struct SummaryJson {
    config: ConfigJson,
    final_disagreement: Sci,
    truncated: bool,
    truncated_at: Option<u64>,
    decay_slope: Option<Sci>,
}

pub fn simulation_summary_json(cfg: &SimConfig, traj: &Trajectory) -> String {
    to_json(&SummaryJson {
        config: ConfigJson {
            topology: cfg.topology,
            n: cfg.n,
            gamma: Sci(cfg.gamma),
            dt: Sci(cfg.dt),
            horizon: Sci(cfg.horizon),
            seed: cfg.seed,
            init_low: Sci(cfg.init_low),
            init_high: Sci(cfg.init_high),
            zero_velocity: cfg.zero_velocity,
            record_stride: cfg.record_stride,
        },
        final_disagreement: Sci(traj.final_disagreement()),
        truncated: traj.truncated(),
        truncated_at: traj.truncated_at,
        decay_slope: traj.tail_decay_slope().map(Sci),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::closed_form_spectrum;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, -0.0032205268946050578, 1e-300, 3.0, std::f64::consts::PI] {
            let s = fmt_num(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let mantissa = s.split('e').next().unwrap();
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }

    #[test]
    fn json_uses_same_text_as_csv() {
        let r = closed_form_spectrum(3, Sign::Laplacian).unwrap();
        let json = spectrum_json(&r);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 6);
        let csv = spectrum_csv(&r);
        let first_re = csv.lines().nth(1).unwrap().split(',').next().unwrap().to_string();
        assert!(json.contains(&first_re));
        assert!(serde_json::to_string(&Sci(f64::NAN)).unwrap() == "null");
    }

    #[test]
    fn csv_headers() {
        let r = closed_form_spectrum(8, Sign::Laplacian).unwrap();
        let csv = spectrum_csv(&r);
        assert!(csv.starts_with("re,im,cassini_residual\n"));
        assert_eq!(csv.lines().count(), 17);
        assert!(cassini_csv(Sign::Laplacian, 10).lines().count() == 11);
    }
}
