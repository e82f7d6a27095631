//! Left multiplication by polynomial Hamiltonians and Moyal time evolution.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::poly::PolySymbol;
use crate::error::{Error, Result};
use crate::numerics::fourier::spectral_derivative;
use crate::numerics::grid::PhaseGrid;
use crate::weyl::{kernel_from_symbol, symbol_from_kernel, OperatorKernel, SampledSymbol};

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// `d^nx/dx^nx d^np/dp^np` of sampled values by FFT along each axis.
fn grid_derivative(f: &SampledSymbol, nx: u32, np: u32) -> DMatrix<Complex64> {
    let g = f.grid;
    let n = g.n();
    let mut m = f.values.clone();
    if nx > 0 {
        for l in 0..n {
            let col: Vec<Complex64> = m.column(l).iter().copied().collect();
            for (i, v) in spectral_derivative(&col, g.dx(), nx).into_iter().enumerate() {
                m[(i, l)] = v;
            }
        }
    }
    if np > 0 {
        for i in 0..n {
            let row: Vec<Complex64> = m.row(i).iter().copied().collect();
            for (l, v) in spectral_derivative(&row, g.dp(), np).into_iter().enumerate() {
                m[(i, l)] = v;
            }
        }
    }
    m
}

/// `H * rho` for polynomial `H`, i.e. `H(x + (i hbar/2) d_p, p - (i hbar/2) d_x) rho`,
/// with spectral derivatives of `rho`.
pub fn bopp_left(h: &PolySymbol, rho: &SampledSymbol) -> Result<SampledSymbol> {
    let g = rho.grid;
    let hb = g.hbar();
    let ih2 = Complex64::new(0.0, 0.5 * hb);
    let (xs, ps) = (g.xs(), g.ps());
    let n = g.n();
    let d = h.degree();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for m in 0..=d {
        for k in 0..=d - m {
            let dh = h.derivative(k, m);
            if dh.terms().next().is_none() {
                continue;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let c = ih2.powu((m + k) as u32) * (sign / (factorial(m) * factorial(k)));
            let dr = grid_derivative(rho, m as u32, k as u32);
            for i in 0..n {
                for l in 0..n {
                    out[(i, l)] += c * dh.eval(xs[i], ps[l]) * dr[(i, l)];
                }
            }
        }
    }
    SampledSymbol::new(g, out, format!("H*{}", rho.label))
}

/// `max |H * rho - E rho| / max |rho|` on the grid interior, for `H` of degree
/// at most two.
pub fn star_genvalue_residual(h: &PolySymbol, rho: &SampledSymbol, e: f64) -> Result<f64> {
    if h.degree() > 2 {
        return Err(Error::DegreeOverflow { degree: h.degree(), max: 2 });
    }
    let hr = bopp_left(h, rho)?;
    let diff = hr.sub(&rho.scale(e.into()))?;
    let scale = rho.interior_max_abs();
    if scale == 0.0 {
        return Err(Error::InvalidParameter("rho vanishes on the grid interior".into()));
    }
    Ok(diff.interior_max_abs() / scale)
}

/// Spectral decomposition of a real quadratic Hamiltonian's Weyl operator on
/// the position grid. `x p` is Weyl-ordered as `(XP + PX)/2`; `P` acts
/// diagonally on the momentum samples.
#[derive(Debug, Clone)]
pub struct MoyalEvolution {
    grid: PhaseGrid,
    energies: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl MoyalEvolution {
    pub fn new(h: &PolySymbol, grid: PhaseGrid) -> Result<Self> {
        if h.degree() > 2 {
            return Err(Error::UnsupportedHamiltonian(format!(
                "degree {} (at most 2 supported)",
                h.degree()
            )));
        }
        if !h.is_real() {
            return Err(Error::UnsupportedHamiltonian("complex coefficients".into()));
        }
        if (h.hbar() - grid.hbar()).abs() > 1e-12 * grid.hbar() {
            return Err(Error::InvalidParameter("Hamiltonian and grid disagree on hbar".into()));
        }
        let n = grid.n();
        let ps = grid.ps();
        // circulant stencil of a function of p: d[m] = (1/n) sum_l w(p_l) e^{2 pi i (l - n/2) m / n}
        let stencil = |w: &dyn Fn(f64) -> f64| -> Vec<Complex64> {
            (0..n)
                .map(|m| {
                    (0..n)
                        .map(|l| {
                            let ang = 2.0 * std::f64::consts::PI * (l as f64 - (n / 2) as f64) * m as f64 / n as f64;
                            Complex64::from_polar(w(ps[l]), ang)
                        })
                        .sum::<Complex64>()
                        / n as f64
                })
                .collect()
        };
        let circ = |d: &[Complex64]| DMatrix::from_fn(n, n, |j, k| d[(j + n - k) % n]);
        let pm = circ(&stencil(&|p| p));
        let p2 = circ(&stencil(&|p| p * p));
        let xd = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            grid.xs().into_iter().map(Complex64::from),
        ));
        let c = |a, b| h.coeff(a, b);
        let mut hm = DMatrix::<Complex64>::identity(n, n) * c(0, 0);
        hm += &xd * c(1, 0) + &pm * c(0, 1) + (&xd * &xd) * c(2, 0) + &p2 * c(0, 2);
        hm += (&xd * &pm + &pm * &xd) * (c(1, 1) * 0.5);
        let eig = SymmetricEigen::new(hm);
        Ok(Self { grid, energies: eig.eigenvalues.iter().copied().collect(), vectors: eig.eigenvectors })
    }

    pub fn grid(&self) -> PhaseGrid {
        self.grid
    }

    /// Eigenvalues of the discretized Hamiltonian, ascending.
    pub fn energies(&self) -> Vec<f64> {
        let mut e = self.energies.clone();
        e.sort_by(f64::total_cmp);
        e
    }

    /// `exp(-i t H / hbar)` acting on position samples.
    pub fn unitary(&self, t: f64) -> DMatrix<Complex64> {
        let hb = self.grid.hbar();
        let mut vd = self.vectors.clone();
        for (j, e) in self.energies.iter().enumerate() {
            let ph = Complex64::from_polar(1.0, -e * t / hb);
            vd.column_mut(j).iter_mut().for_each(|v| *v *= ph);
        }
        vd * self.vectors.adjoint()
    }

    /// Symbol of `exp(-i t H / hbar)` on the grid.
    pub fn star_exponential(&self, t: f64) -> SampledSymbol {
        let k = OperatorKernel { grid: self.grid, matrix: self.unitary(t) / Complex64::from(self.grid.dx()) };
        symbol_from_kernel(&k).with_label("star_exp")
    }

    /// `rho(t) = Exp(-itH/hbar) * rho * Exp(itH/hbar)`.
    pub fn evolve(&self, rho: &SampledSymbol, t: f64) -> Result<SampledSymbol> {
        if !rho.grid.same_as(&self.grid) {
            return Err(Error::GridMismatch);
        }
        let u = self.unitary(t);
        let k = kernel_from_symbol(rho);
        let m = &u * k.matrix * u.adjoint();
        Ok(symbol_from_kernel(&OperatorKernel { grid: self.grid, matrix: m }).with_label(rho.label.clone()))
    }
}

/// One-shot [`MoyalEvolution::evolve`].
pub fn evolve_wigner(rho0: &SampledSymbol, h: &PolySymbol, t: f64) -> Result<SampledSymbol> {
    MoyalEvolution::new(h, rho0.grid)?.evolve(rho0, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::laguerre;
    use std::f64::consts::PI;

    fn rho_n(g: PhaseGrid, n: usize) -> SampledSymbol {
        let hb = g.hbar();
        SampledSymbol::from_real_fn(g, "rho", move |x, p| {
            let hh = 0.5 * (x * x + p * p);
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            s / (PI * hb) * (-2.0 * hh / hb).exp() * laguerre(n, 4.0 * hh / hb).unwrap()
        })
    }

    #[test]
    fn ho_genvalues() {
        let g = PhaseGrid::square(64, 1.0).unwrap();
        let h = PolySymbol::harmonic(1.0, 1.0, 1.0);
        for n in 0..4 {
            let r = star_genvalue_residual(&h, &rho_n(g, n), n as f64 + 0.5).unwrap();
            assert!(r < 1e-6, "{n} {r}");
        }
        let wrong = star_genvalue_residual(&h, &rho_n(g, 0), 0.45).unwrap();
        assert!((wrong - 0.05).abs() < 1e-6, "{wrong}");
        let cubic = PolySymbol::parse("x^3", 1.0).unwrap();
        assert!(matches!(
            star_genvalue_residual(&cubic, &rho_n(g, 0), 0.0),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn free_hamiltonian_on_p_only_symbol() {
        let g = PhaseGrid::square(64, 1.0).unwrap();
        let h = PolySymbol::parse("0.5*p^2", 1.0).unwrap();
        let r = SampledSymbol::from_real_fn(g, "r", |_, p| (-p * p).exp());
        let expect = SampledSymbol::from_real_fn(g, "", |_, p| 0.5 * p * p * (-p * p).exp());
        assert!(bopp_left(&h, &r).unwrap().max_diff(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn discrete_ho_levels() {
        let g = PhaseGrid::square(128, 1.0).unwrap();
        let ev = MoyalEvolution::new(&PolySymbol::harmonic(1.0, 1.0, 1.0), g).unwrap();
        for (n, e) in ev.energies().iter().take(10).enumerate() {
            assert!((e - (n as f64 + 0.5)).abs() < 1e-10, "{n} {e}");
        }
    }

    #[test]
    fn stationary_levels() {
        let g = PhaseGrid::square(128, 1.0).unwrap();
        let ev = MoyalEvolution::new(&PolySymbol::harmonic(1.0, 1.0, 1.0), g).unwrap();
        for n in [0, 2] {
            let r = rho_n(g, n);
            let rt = ev.evolve(&r, 1.3).unwrap();
            assert!(rt.max_diff(&r).unwrap() < 1e-6);
        }
        assert!(ev.evolve(&rho_n(g, 1), 0.0).unwrap().max_diff(&rho_n(g, 1)).unwrap() < 1e-8 * 4.0);
    }

    #[test]
    fn coherent_state_rotates() {
        let g = PhaseGrid::square(128, 1.0).unwrap();
        let ev = MoyalEvolution::new(&PolySymbol::harmonic(1.0, 1.0, 1.0), g).unwrap();
        let q0 = 2.0;
        let r0 = SampledSymbol::from_real_fn(g, "c", |x, p| (-((x - q0).powi(2) + p * p)).exp() / PI);
        for t in [0.7, 2.0, 2.0 * PI] {
            let rt = ev.evolve(&r0, t).unwrap();
            let (c, s) = (t.cos(), t.sin());
            let expect = SampledSymbol::from_real_fn(g, "", |x, p| {
                let (x0, p0) = (x * c - p * s, x * s + p * c);
                (-((x0 - q0).powi(2) + p0 * p0)).exp() / PI
            });
            assert!(rt.max_diff(&expect).unwrap() < 1e-8);
            assert!(rt.max_imag() < 1e-10);
            assert!((rt.integral().re - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn unsupported() {
        let g = PhaseGrid::centered(8.0, 32, 1.0).unwrap();
        let cubic = PolySymbol::parse("p^2 + x^3", 1.0).unwrap();
        assert!(matches!(MoyalEvolution::new(&cubic, g), Err(Error::UnsupportedHamiltonian(_))));
        let cplx = PolySymbol::parse("p^2 + i*x", 1.0).unwrap();
        assert!(matches!(MoyalEvolution::new(&cplx, g), Err(Error::UnsupportedHamiltonian(_))));
    }
}
