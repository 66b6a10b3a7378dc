use std::fmt;

use super::{CutKind, SatMode, Satgen, SatgenError, DEFAULT_CAP};
use crate::complexity::profile;
use crate::fol::Signature;

/// `y = slope * n + intercept`, fitted by exact integer differencing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFit {
    pub slope: i64,
    pub intercept: i64,
    /// Largest `|y - (slope * n + intercept)|` over the points.
    pub max_residual: i64,
    /// Whether consecutive differences were all equal.
    pub exact: bool,
}

/// Fits through the last two points (the asymptotic regime) and records
/// how far the earlier points stray. Needs at least two points with
/// distinct, increasing `n`.
pub fn fit_linear(points: &[(u32, i64)]) -> Option<LinearFit> {
    let [.., (n1, y1), (n2, y2)] = points else { return None };
    if n2 <= n1 || (y2 - y1) % i64::from(n2 - n1) != 0 {
        return None;
    }
    let slope = (y2 - y1) / i64::from(n2 - n1);
    let intercept = y2 - slope * i64::from(*n2);
    let max_residual = points.iter().map(|&(n, y)| (y - slope * i64::from(n) - intercept).abs()).max().unwrap_or(0);
    Some(LinearFit { slope, intercept, max_residual, exact: max_residual == 0 })
}

/// Second differences of a sequence; all zero exactly when it is linear.
fn second_differences(ys: &[i64]) -> Vec<i64> {
    ys.windows(3).map(|w| w[2] - 2 * w[1] + w[0]).collect()
}

/// Measurements of one generated family over a range of levels.
#[derive(Clone, Debug)]
pub struct FamilyFit {
    pub name: String,
    /// `(n, rho)` per level.
    pub rho: Vec<(u32, u32)>,
    /// `(n, rho0)` per level.
    pub rho0: Vec<(u32, u32)>,
    /// `(n, symbol count)` per level.
    pub symbols: Vec<(u32, usize)>,
    pub rho_fit: Option<LinearFit>,
}

impl FamilyFit {
    fn new(name: &str, rows: Vec<(u32, u32, u32, usize)>) -> FamilyFit {
        let rho: Vec<(u32, u32)> = rows.iter().map(|r| (r.0, r.1)).collect();
        let rho0 = rows.iter().map(|r| (r.0, r.2)).collect();
        let symbols = rows.iter().map(|r| (r.0, r.3)).collect();
        let points: Vec<(u32, i64)> = rho.iter().map(|&(n, r)| (n, i64::from(r))).collect();
        let rho_fit = fit_linear(&points);
        FamilyFit { name: name.to_string(), rho, rho0, symbols, rho_fit }
    }

    /// `rho` differences between consecutive levels.
    pub fn rho_steps(&self) -> Vec<i64> {
        self.rho.windows(2).map(|w| i64::from(w[1].1) - i64::from(w[0].1)).collect()
    }

    /// `max_n (rho(n) - slope * n)`: the intercept of the tightest envelope
    /// with the given slope.
    pub fn envelope(&self, slope: i64) -> i64 {
        self.rho.iter().map(|&(n, r)| i64::from(r) - slope * i64::from(n)).max().unwrap_or(0)
    }

    pub fn symbols_linear(&self) -> bool {
        let ys: Vec<i64> = self.symbols.iter().map(|&(_, s)| s as i64).collect();
        second_differences(&ys).iter().all(|&d| d == 0)
    }

    /// Every symbol-count ratio between consecutive levels is at least `ratio`.
    pub fn symbols_geometric(&self, ratio: f64) -> bool {
        self.symbols.windows(2).all(|w| w[1].1 as f64 >= ratio * w[0].1 as f64)
    }
}

/// Measured values of the growth constants. `c0`/`c1` are the slope and
/// intercept of `rho(sat_n)`; the others are intercepts of `c0 * n + c`
/// envelopes for the cut families.
#[derive(Clone, Debug)]
pub struct ConstantsReport {
    pub cap: u32,
    pub c0: i64,
    pub c1: i64,
    /// `Jdag`.
    pub c3: i64,
    /// `Jcirc` slope and intercept.
    pub c5: i64,
    pub c6: i64,
    /// `Jstar`.
    pub c7: i64,
    /// `Jddag`.
    pub c8: i64,
    /// `Y`.
    pub c9: i64,
    /// `Im`.
    pub c10: i64,
    /// Whether `rho(sat_n)` has a single step for `n >= 2`.
    pub sat_slope_constant: bool,
    pub optimized_symbols_linear: bool,
    pub naive_symbols_superlinear: bool,
    pub families: Vec<FamilyFit>,
    /// Families whose `rho` step is not constant from `n = 2` on.
    pub irregular: Vec<String>,
}

impl fmt::Display for ConstantsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# growth constants, levels up to {}", self.cap)?;
        for (name, v) in [
            ("c0", self.c0),
            ("c1", self.c1),
            ("c3", self.c3),
            ("c5", self.c5),
            ("c6", self.c6),
            ("c7", self.c7),
            ("c8", self.c8),
            ("c9", self.c9),
            ("c10", self.c10),
        ] {
            writeln!(f, "{name:<4} {v}")?;
        }
        writeln!(f, "sat slope constant from n = 2: {}", self.sat_slope_constant)?;
        writeln!(f, "optimized symbol counts linear: {}", self.optimized_symbols_linear)?;
        writeln!(f, "naive symbol counts superlinear: {}", self.naive_symbols_superlinear)?;
        if !self.irregular.is_empty() {
            writeln!(f, "non-constant slope: {}", self.irregular.join(", "))?;
        }
        writeln!(f, "\n{:<16} {:>3} {:>5} {:>5} {:>9}", "family", "n", "rho", "rho0", "symbols")?;
        for fam in &self.families {
            for ((n, rho), ((_, rho0), (_, sym))) in fam.rho.iter().zip(fam.rho0.iter().zip(&fam.symbols)) {
                writeln!(f, "{:<16} {n:>3} {rho:>5} {rho0:>5} {sym:>9}", fam.name)?;
            }
        }
        Ok(())
    }
}

/// Levels used for the naive family; beyond this the formulas run to
/// hundreds of millions of symbols.
pub const NAIVE_LEVELS: u32 = 6;

/// Generates every family over a one-predicate object signature for
/// `n <= cap` and fits the constants.
pub fn measure_constants(cap: u32) -> Result<ConstantsReport, SatgenError> {
    let cap = cap.clamp(3, DEFAULT_CAP);
    let theta = Signature::with_preds("theta", &[("P", 1)])?;
    let g = Satgen::new(&theta)?.with_cap(cap);
    let row = |n: u32, f: &crate::fol::Formula| {
        let p = profile(f);
        (n, p.rho, p.rho0, f.symbol_count())
    };

    let mut families = Vec::new();
    for mode in [SatMode::Optimized, SatMode::Naive] {
        let top = if mode == SatMode::Naive { cap.min(NAIVE_LEVELS) } else { cap };
        let rows = (0..=top).map(|n| g.gen_sat(n, mode).map(|s| row(n, &s.formula))).collect::<Result<Vec<_>, _>>()?;
        families.push(FamilyFit::new(&format!("sat/{mode}"), rows));
    }
    // Y and Im at n reach one level up, so they stop one short of the cap.
    for (kind, lo, hi) in [
        (CutKind::Jdag, 1, cap),
        (CutKind::Jcirc, 0, cap),
        (CutKind::Jstar, 1, cap),
        (CutKind::Jddag, 1, cap),
        (CutKind::Y, 0, cap - 1),
        (CutKind::Im, 0, cap - 1),
    ] {
        let rows = (lo..=hi).map(|n| g.gen_cut(kind, n).map(|c| row(n, &c.formula))).collect::<Result<Vec<_>, _>>()?;
        families.push(FamilyFit::new(&kind.to_string(), rows));
    }

    let from_two = |fam: &FamilyFit| -> Vec<i64> {
        let tail: Vec<(u32, u32)> = fam.rho.iter().copied().filter(|&(n, _)| n >= 2).collect();
        tail.windows(2).map(|w| i64::from(w[1].1) - i64::from(w[0].1)).collect()
    };
    let constant = |steps: &[i64]| steps.windows(2).all(|w| w[0] == w[1]);
    let irregular = families.iter().filter(|f| !constant(&from_two(f))).map(|f| f.name.clone()).collect::<Vec<_>>();

    let sat = &families[0];
    let sat_tail: Vec<(u32, i64)> = sat.rho.iter().filter(|&&(n, _)| n >= 2).map(|&(n, r)| (n, i64::from(r))).collect();
    let sat_fit = fit_linear(&sat_tail).expect("at least two levels from n = 2");
    let c0 = sat_fit.slope;
    let by_name = |name: &str| families.iter().find(|f| f.name == name).expect("family generated");
    let jcirc_fit = by_name("Jcirc").rho_fit.clone().expect("Jcirc has several levels");

    Ok(ConstantsReport {
        cap,
        c0,
        c1: sat_fit.intercept,
        c3: by_name("Jdag").envelope(c0),
        c5: jcirc_fit.slope,
        c6: by_name("Jcirc").envelope(jcirc_fit.slope),
        c7: by_name("Jstar").envelope(c0),
        c8: by_name("Jddag").envelope(c0),
        c9: by_name("Y").envelope(c0),
        c10: by_name("Im").envelope(c0),
        sat_slope_constant: constant(&from_two(sat)),
        optimized_symbols_linear: sat.symbols_linear(),
        naive_symbols_superlinear: second_differences(
            &families[1].symbols.iter().map(|&(_, s)| s as i64).collect::<Vec<_>>(),
        )
        .iter()
        .all(|&d| d > 0),
        families,
        irregular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_exact_and_residual() {
        let fit = fit_linear(&[(1, 5), (2, 8), (3, 11)]).unwrap();
        assert_eq!((fit.slope, fit.intercept, fit.max_residual, fit.exact), (3, 2, 0, true));
        let fit = fit_linear(&[(0, 0), (1, 5), (2, 8), (3, 11)]).unwrap();
        assert_eq!((fit.slope, fit.intercept, fit.max_residual), (3, 2, 2));
        assert!(fit_linear(&[(1, 1)]).is_none());
        assert!(fit_linear(&[(2, 1), (1, 1)]).is_none());
    }

    #[test]
    fn second_differences_detect_curvature() {
        assert_eq!(second_differences(&[1, 3, 5, 7]), vec![0, 0]);
        assert_eq!(second_differences(&[1, 2, 4, 8]), vec![1, 2]);
    }

    #[test]
    fn small_cap_report() {
        let r = measure_constants(4).unwrap();
        assert_eq!((r.c0, r.c1), (3, 6));
        assert!(r.sat_slope_constant && r.optimized_symbols_linear && r.naive_symbols_superlinear);
        assert!(r.irregular.is_empty(), "{:?}", r.irregular);
        let text = r.to_string();
        assert!(text.contains("c10") && text.contains("sat/naive"));
    }
}
