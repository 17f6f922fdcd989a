//! Range characterization of the fan-beam transform on the Fourier
//! lattice: the oddness, conjugacy, symmetry, and moment conditions, the
//! vanishing/reflection corollary, and the orthogonal projection onto the
//! consistent subspace.

use num_complex::Complex64;
use serde::Serialize;

use crate::lattice::FourierLattice;

/// Outcome of one lattice condition check.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub max_abs_residual: f64,
    pub worst_n: i64,
    pub worst_k: i64,
    pub pairs_checked: usize,
    /// Fraction of candidate identities whose partner entry lies inside
    /// the truncated band; out-of-band pairs are skipped, not failed.
    pub coverage_fraction: f64,
    pub tolerance: f64,
    pub pass: bool,
}

struct Accum {
    max: f64,
    worst: (i64, i64),
    checked: usize,
    skipped: usize,
}

impl Accum {
    fn new() -> Self {
        Self {
            max: 0.0,
            worst: (0, 0),
            checked: 0,
            skipped: 0,
        }
    }
    fn push(&mut self, n: i64, k: i64, r: f64) {
        self.checked += 1;
        if r > self.max {
            self.max = r;
            self.worst = (n, k);
        }
    }
    fn report(self, condition: &str, tol: f64) -> ConditionReport {
        let total = self.checked + self.skipped;
        ConditionReport {
            condition: condition.to_string(),
            max_abs_residual: self.max,
            worst_n: self.worst.0,
            worst_k: self.worst.1,
            pairs_checked: self.checked,
            coverage_fraction: if total == 0 {
                1.0
            } else {
                self.checked as f64 / total as f64
            },
            tolerance: tol,
            pass: self.max <= tol,
        }
    }
}

fn sign(p: i64) -> f64 {
    if p.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Even angular modes must vanish.
pub fn check_oddness(lat: &FourierLattice, tol: f64) -> ConditionReport {
    let mut acc = Accum::new();
    for (n, k, c) in lat.iter() {
        if n % 2 == 0 {
            acc.push(n, k, c.norm());
        }
    }
    acc.report("oddness", tol)
}

/// Reality of the underlying data: `g_{-n,-k} = conj g_{n,k}`.
pub fn check_conjugacy(lat: &FourierLattice, tol: f64) -> ConditionReport {
    let mut acc = Accum::new();
    for (n, k, c) in lat.iter() {
        acc.push(n, k, (lat.get(-n, -k).conj() - c).norm());
    }
    acc.report("conjugacy", tol)
}

/// The reflection symmetry `g_{n,k} = (-1)^{n+k} g_{n+2k,-k}` on the
/// whole lattice.
pub fn check_symmetry(lat: &FourierLattice, tol: f64) -> ConditionReport {
    let mut acc = Accum::new();
    for (n, k, c) in lat.iter() {
        if lat.in_band(n + 2 * k, -k) {
            acc.push(n, k, (c - sign(n + k) * lat.get(n + 2 * k, -k)).norm());
        } else {
            acc.skipped += 1;
        }
    }
    acc.report("symmetry", tol)
}

/// The moment condition `g_{n,k} = (-1)^k g_{n+2k,-k}` for odd `n <= -1`
/// and `k <= 0`.
pub fn check_moments(lat: &FourierLattice, tol: f64) -> ConditionReport {
    let mut acc = Accum::new();
    let mut n = -1i64;
    while n >= -lat.n_max() {
        for k in -lat.k_max()..=0 {
            if lat.in_band(n + 2 * k, -k) {
                acc.push(
                    n,
                    k,
                    (lat.get(n, k) - sign(k) * lat.get(n + 2 * k, -k)).norm(),
                );
            } else {
                acc.skipped += 1;
            }
        }
        n -= 2;
    }
    acc.report("moments", tol)
}

/// The corollary on the odd negative modes: entries with `n + 2k <= -1`
/// vanish, and entries with `n + 2k >= 1` pair by
/// `g_{n,k} = (-1)^{k+1} conj g_{-n-2k,k}` (real diagonal at `k = -n`).
pub fn check_corollary(lat: &FourierLattice, tol: f64) -> ConditionReport {
    let mut acc = Accum::new();
    let mut n = -1i64;
    while n >= -lat.n_max() {
        for k in -lat.k_max()..=lat.k_max() {
            if n + 2 * k <= -1 {
                acc.push(n, k, lat.get(n, k).norm());
            } else if lat.in_band(-n - 2 * k, k) {
                let r = (lat.get(n, k) - sign(k + 1) * lat.get(-n - 2 * k, k).conj()).norm();
                acc.push(n, k, r);
            } else {
                acc.skipped += 1;
            }
        }
        n -= 2;
    }
    acc.report("corollary", tol)
}

/// All five checks with a shared absolute tolerance.
pub fn check_all(lat: &FourierLattice, tol: f64) -> Vec<ConditionReport> {
    vec![
        check_oddness(lat, tol),
        check_conjugacy(lat, tol),
        check_symmetry(lat, tol),
        check_moments(lat, tol),
        check_corollary(lat, tol),
    ]
}

/// Orthogonal projection of a lattice onto the consistent subspace cut
/// out by the oddness, conjugacy, and corollary identities (symmetry and
/// moments follow from those three). Idempotent and non-expansive in the
/// entrywise `l^2` norm.
pub fn project_consistent(lat: &FourierLattice) -> FourierLattice {
    let n_max = lat.n_max();
    let mut out = FourierLattice::zeros(n_max, lat.k_max());
    let mut n = -1i64;
    while n >= -n_max {
        for k in -lat.k_max()..=lat.k_max() {
            if n + 2 * k <= -1 {
                continue; // vanishing region, conjugate mirror stays zero too
            }
            // reflection region; handle each orbit once, at the member
            // with k >= |n| (the partner angular index is -n-2k)
            if k < -n {
                continue;
            }
            let a = lat.get(n, k);
            let c = lat.get(-n, -k);
            if k == -n {
                // self-paired: entry must be real, conjugate pair equal
                let v = Complex64::new(0.5 * (a.re + c.re), 0.0);
                out.set(n, k, v);
                out.set(-n, -k, v);
            } else if n + 2 * k <= n_max {
                let s = sign(k + 1);
                let b = lat.get(-n - 2 * k, k);
                let d = lat.get(n + 2 * k, -k);
                let a1 = (a + s * b.conj() + c.conj() + s * d) * 0.25;
                out.set(n, k, a1);
                out.set(-n - 2 * k, k, s * a1.conj());
                out.set(-n, -k, a1.conj());
                out.set(n + 2 * k, -k, s * a1);
            } else {
                // partner outside the band: only conjugacy constrains the pair
                let a1 = (a + c.conj()) * 0.5;
                out.set(n, k, a1);
                out.set(-n, -k, a1.conj());
            }
        }
        n -= 2;
    }
    out
}
