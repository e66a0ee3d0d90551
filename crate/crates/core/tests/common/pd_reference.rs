//! Single-subcarrier outage expressions written out term by term, kept
//! separate from the library's unified evaluator so the two can be
//! compared. Valid when `beta >= tau`.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct PdParams {
    pub users: usize,
    pub m: usize,
    pub n: usize,
    pub a_m: f64,
    pub a_n: f64,
    pub r_m: f64,
    pub r_n: f64,
    pub alpha: f64,
    pub eta: f64,
    pub r_d: f64,
    pub omega_i: f64,
    pub nodes: usize,
    pub rho: f64,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn binom(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

impl PdParams {
    pub fn eps_m(&self) -> f64 {
        2f64.powf(self.r_m) - 1.0
    }
    pub fn eps_n(&self) -> f64 {
        2f64.powf(self.r_n) - 1.0
    }
    pub fn tau(&self) -> f64 {
        self.eps_m() / (self.rho * (self.a_m - self.eps_m() * self.a_n))
    }
    pub fn beta(&self) -> f64 {
        self.eps_n() / (self.rho * self.a_n)
    }
    pub fn vartheta(&self) -> f64 {
        self.eps_n() / self.a_n
    }
    /// `None` when `a_n <= eps_n a_m`.
    pub fn upsilon(&self) -> Option<f64> {
        let d = self.a_n - self.eps_n() * self.a_m;
        (d > 0.0).then(|| self.eps_n() / (self.rho * d))
    }
    pub fn zeta(&self) -> f64 {
        match self.upsilon() {
            Some(u) => self.tau().min(u),
            None => self.tau(),
        }
    }

    /// `sum_u b_u (1 - exp(-x c_u / eta))`, saturated at one.
    fn bracket(&self, x: f64) -> f64 {
        let u_max = self.nodes as f64;
        let mut s = 0.0;
        for u in 1..=self.nodes {
            let theta = ((2.0 * u as f64 - 1.0) / (2.0 * u_max) * PI).cos();
            let b = PI / (2.0 * u_max) * (1.0 - theta * theta).sqrt() * (theta + 1.0);
            let c = 1.0 + (self.r_d / 2.0 * (theta + 1.0)).powf(self.alpha);
            s += b * (1.0 - (-x * c / self.eta).exp());
        }
        s.min(1.0)
    }

    fn phi(&self, r: usize) -> f64 {
        factorial(self.users) / (factorial(r - 1) * factorial(self.users - r))
    }

    /// `phi_r sum_p C(M - r, p) (-1)^p / (r + p) [bracket(x)]^(r + p)`.
    fn ordered(&self, r: usize, x: f64) -> f64 {
        let s = self.bracket(x);
        let mut acc = 0.0;
        for p in 0..=self.users - r {
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            acc += binom(self.users - r, p) * sign / (r + p) as f64 * s.powi((r + p) as i32);
        }
        self.phi(r) * acc
    }

    /// `(phi_n / Omega_I) sum_p ... int_0^inf e^{-y/Omega_I} [bracket(vartheta y + beta)]^(n+p) dy`.
    fn ri_integral(&self) -> f64 {
        let (th, b, om) = (self.vartheta(), self.beta(), self.omega_i);
        // y = Omega_I t
        let f = |t: f64| (-t).exp() * self.ordered(self.n, th * om * t + b);
        adaptive(&f, 0.0, 80.0, 1e-16, 40)
    }

    /// m-th user.
    pub fn p_m(&self) -> f64 {
        self.ordered(self.m, self.tau())
    }

    /// n-th user, imperfect SIC, existing formulation.
    pub fn p_n_exf_ipsic(&self) -> f64 {
        self.ri_integral()
    }

    /// n-th user, perfect SIC, existing formulation.
    pub fn p_n_exf_psic(&self) -> f64 {
        self.ordered(self.n, self.beta())
    }

    /// n-th user, imperfect SIC, alternative formulation.
    pub fn p_n_alf_ipsic(&self) -> f64 {
        self.ordered(self.n, self.zeta()) - self.ordered(self.n, self.tau()) + self.ri_integral()
    }

    /// n-th user, perfect SIC, alternative formulation.
    pub fn p_n_alf_psic(&self) -> f64 {
        self.ordered(self.n, self.zeta()) + self.ordered(self.n, self.beta()) - self.ordered(self.n, self.tau())
    }
}

const GL_NODES: [f64; 5] = [
    0.1488743389816312,
    0.4333953941292472,
    0.6794095682990244,
    0.8650633666889845,
    0.9739065285171717,
];
const GL_WEIGHTS: [f64; 5] = [
    0.2955242247147529,
    0.2692667193099963,
    0.219086362515982,
    0.1494513491505806,
    0.0666713443086881,
];

fn gauss_legendre(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        acc += w * (f(mid - half * x) + f(mid + half * x));
    }
    acc * half
}

/// Bisects until the 10-point Gauss–Legendre value of each panel agrees
/// with the sum over its halves to `tol`, or to rounding level.
fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let mid = 0.5 * (a + b);
        let (l, r) = (gauss_legendre(f, a, mid), gauss_legendre(f, mid, b));
        if depth == 0 || (l + r - whole).abs() <= tol.max(8.0 * f64::EPSILON * (l + r).abs()) {
            return l + r;
        }
        rec(f, a, mid, l, tol, depth - 1) + rec(f, mid, b, r, tol, depth - 1)
    }
    rec(f, a, b, gauss_legendre(f, a, b), tol, depth)
}

/// Random single-subcarrier configurations with `beta >= tau`.
pub fn fuzz_cases(count: usize, seed: u64) -> Vec<PdParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let users = rng.random_range(2..=6);
        let n = rng.random_range(2..=users);
        let m = rng.random_range(1..n);
        let a_m: f64 = rng.random_range(0.55..0.95);
        let p = PdParams {
            users,
            m,
            n,
            a_m,
            a_n: 1.0 - a_m,
            r_m: rng.random_range(0.01..1.5),
            r_n: rng.random_range(0.01..2.0),
            alpha: rng.random_range(2.0..4.0),
            eta: rng.random_range(0.5..2.0),
            r_d: rng.random_range(0.5..10.0),
            omega_i: 10f64.powf(rng.random_range(-4.0..-1.0)),
            nodes: rng.random_range(5..=30),
            rho: 10f64.powf(rng.random_range(0.0..5.0)),
        };
        if p.a_m > p.eps_m() * p.a_n && p.beta() >= p.tau() {
            out.push(p);
        }
    }
    out
}
