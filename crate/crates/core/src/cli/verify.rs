//! Cross-check suites run by `moduli verify`.

use clap::ValueEnum;

use crate::descendent::{admissible_indices, effective_recursion, psi_correlator};
use crate::error::Result;
use crate::exact::{dfq, rint, MultiIndex};
use crate::hodge::{closed_formula_oracle, fa3_sides, hodge_integral, psi_lambda, ClosedFormula, HodgeIntegrand};
use crate::mocktheta::{garthwaite_omega, omega_series};
use crate::npoint::{compositions, npoint_coefficient};
use crate::reference;
use crate::rspin::{rspin_correlator, RSpinKey};
use crate::wpvolumes::{alpha, alpha_closed, wp_mixed, wp_volume};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// DVV, the effective recursion and n-point coefficients agree.
    DvvVsNpoint,
    /// λ_g, λ_gλ_{g−1} and λ_{g−1}³ closed forms.
    HodgeClosedForms,
    /// Weil–Petersson volumes by three routes; α against its closed form.
    WpRoutes,
    /// The top-intersection identity for d_j ≥ 1.
    FaberFa3,
    /// Rounded Garthwaite sums equal the series coefficients.
    MockGarthwaite,
    /// Published r-spin tables for r = 3, 4.
    RspinTables,
}

impl Suite {
    /// Default `--bound`: a dimension for `dvv-vs-npoint`, a genus otherwise.
    pub fn default_bound(self) -> i64 {
        match self {
            Suite::DvvVsNpoint => 10,
            Suite::HodgeClosedForms => 5,
            Suite::WpRoutes => 3,
            Suite::FaberFa3 => 4,
            Suite::MockGarthwaite => 100,
            Suite::RspinTables => 12,
        }
    }
}

/// One family of equalities and the cases that failed.
#[derive(Clone, Debug, Default)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Check { name: name.to_string(), ..Default::default() }
    }

    fn record(&mut self, ok: bool, case: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(case());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run(suite: Suite, bound: i64) -> Result<Vec<Check>> {
    match suite {
        Suite::DvvVsNpoint => dvv_vs_npoint(bound),
        Suite::HodgeClosedForms => hodge_closed_forms(bound),
        Suite::WpRoutes => wp_routes(bound),
        Suite::FaberFa3 => faber_fa3(bound),
        Suite::MockGarthwaite => mock_garthwaite(bound),
        Suite::RspinTables => rspin_tables(bound),
    }
}

fn dvv_vs_npoint(max_dim: i64) -> Result<Vec<Check>> {
    let mut eff = Check::new("dvv = effective");
    let mut npt = Check::new("dvv = npoint");
    for g in 0..=(max_dim + 3) / 3 {
        for n in 1.. {
            let dim = 3 * g - 3 + n as i64;
            if dim > max_dim {
                break;
            }
            for d in admissible_indices(g, n) {
                let v = psi_correlator(g, &d);
                eff.record(effective_recursion(g, &d) == v, || format!("g={g} d={d:?}"));
                npt.record(npoint_coefficient(g, &d)? == v, || format!("g={g} d={d:?}"));
            }
        }
    }
    Ok(vec![eff, npt])
}

fn hodge_closed_forms(max_g: i64) -> Result<Vec<Check>> {
    let mut lg = Check::new("lambda_g");
    let mut l2g = Check::new("lambda_g lambda_g-1");
    let mut l3g = Check::new("lambda_g-1 cubed");
    for g in 1..=max_g {
        for n in 1..=3usize {
            for d in compositions(n, (2 * g - 3 + n as i64) as u32) {
                let want = closed_formula_oracle(ClosedFormula::Lg, g, &d)?;
                lg.record(psi_lambda(g, &d, &[g as u32]) == want, || format!("g={g} d={d:?}"));
            }
            let s = g - 2 + n as i64;
            if s < 0 {
                continue;
            }
            for d in compositions(n, s as u32) {
                if d.iter().filter(|&&x| x == 0).count() > 1 {
                    continue;
                }
                let want = closed_formula_oracle(ClosedFormula::L2g, g, &d)?;
                l2g.record(psi_lambda(g, &d, &[g as u32, g as u32 - 1]) == want, || format!("g={g} d={d:?}"));
            }
        }
        if g >= 2 {
            let k = g as u32 - 1;
            let want = closed_formula_oracle(ClosedFormula::L3g, g, &[])?;
            l3g.record(psi_lambda(g, &[], &[k, k, k]) == want, || format!("g={g}"));
        }
    }
    Ok(vec![lg, l2g, l3g])
}

fn wp_routes(max_g: i64) -> Result<Vec<Check>> {
    let mut routes = Check::new("volume = alpha = kappa");
    for g in 0..=max_g {
        for n in 1..=3usize {
            let w = 3 * g - 3 + n as i64;
            if w < 0 || 2 * g - 2 + n as i64 <= 0 {
                continue;
            }
            for b in MultiIndex::of_weight(w as u64).into_iter().filter(|b| b.length() <= 3) {
                let zeros = vec![0; n];
                let v = wp_volume(g, n, &b)?;
                let k = hodge_integral(&HodgeIntegrand::new(g, &zeros).with_kappa(b.clone()));
                routes.record(wp_mixed(g, &b, &zeros)? == v && k == v, || format!("g={g} n={n} b={b}"));
            }
        }
    }
    let mut a1 = Check::new("alpha closed form");
    let mut ad = Check::new("alpha delta");
    for l in 1..=8u32 {
        a1.record(alpha(&MultiIndex::from_multiplicities(&[l])) == alpha_closed(l), || format!("l={l}"));
        let want = rint(1) / dfq(2 * l as i64 + 1);
        ad.record(alpha(&MultiIndex::delta(l as usize)) == want, || format!("l={l}"));
    }
    Ok(vec![routes, a1, ad])
}

fn faber_fa3(max_g: i64) -> Result<Vec<Check>> {
    let mut c = Check::new("fa3");
    for g in 1..=max_g {
        for n in 1..=4usize {
            let s = g + n as i64 - 2;
            if s < n as i64 {
                continue;
            }
            for d in compositions(n, s as u32).into_iter().filter(|d| !d.contains(&0)) {
                let (l, r) = fa3_sides(g, &d)?;
                c.record(l == r, || format!("g={g} d={d:?}"));
            }
        }
    }
    Ok(vec![c])
}

fn mock_garthwaite(max_n: i64) -> Result<Vec<Check>> {
    let mut c = Check::new("garthwaite = series");
    let n_max = max_n.max(0) as usize;
    let s = omega_series(n_max);
    for n in 0..=n_max {
        let ok = garthwaite_omega(n as u64, 25).is_ok_and(|v| &v == s.coeff(n));
        c.record(ok, || format!("n={n}"));
    }
    Ok(vec![c])
}

fn rspin_tables(max_g: i64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for r in [3u32, 4] {
        let mut c = Check::new(&format!("r={r} table"));
        for (g, ins, want) in reference::rspin_table(r).into_iter().filter(|row| row.0 <= max_g) {
            let key = RSpinKey::new(r, g, &ins)?;
            c.record(rspin_correlator(&key)? == want, || key.to_string());
        }
        out.push(c);
    }
    Ok(out)
}
