//! Moyal star products.
//!
//! Three grid routes compute `f * g` for sampled symbols:
//!
//! * [`star_kernel`] composes Weyl kernels and maps back. This is the
//!   reference route, `O(n^3)`.
//! * [`star_integral`] evaluates the four-dimensional integral representation
//!   directly (`n <= 64`).
//! * [`star_path`] evaluates the two-intermediate-point reduction of the
//!   phase-space path integral with vanishing Hamiltonian (`n <= 64`).
//!
//! Polynomial symbols have an exact route in [`poly`]. All grid results
//! should be read on the interior block of the grid.

mod evolution;
pub mod poly;

pub use evolution::{bopp_left, evolve_wigner, star_genvalue_residual, MoyalEvolution};
pub use poly::{moyal_bracket_poly, poisson_bracket, star_poly, PolySymbol, MAX_DEGREE};

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::fourier::{fft, ifft, refine2};
use crate::weyl::{kernel_from_symbol, symbol_from_kernel, SampledSymbol};

/// Largest grid accepted by the quadrature routes.
pub const MAX_QUADRATURE_N: usize = 64;

fn check_pair(f: &SampledSymbol, g: &SampledSymbol) -> Result<()> {
    if f.grid.same_as(&g.grid) {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

fn check_small(f: &SampledSymbol) -> Result<()> {
    let n = f.grid.n();
    if n > MAX_QUADRATURE_N {
        Err(Error::GridTooLarge { n, max: MAX_QUADRATURE_N })
    } else {
        Ok(())
    }
}

/// `f * g` as the symbol of the product of the Weyl kernels.
pub fn star_kernel(f: &SampledSymbol, g: &SampledSymbol) -> Result<SampledSymbol> {
    check_pair(f, g)?;
    let k = kernel_from_symbol(f).compose(&kernel_from_symbol(g))?;
    Ok(symbol_from_kernel(&k).with_label(format!("{}*{}", f.label, g.label)))
}

/// `(f * g - g * f) / (i hbar)` by the kernel route.
pub fn moyal_bracket(f: &SampledSymbol, g: &SampledSymbol) -> Result<SampledSymbol> {
    let d = star_kernel(f, g)?.sub(&star_kernel(g, f)?)?;
    Ok(d.scale(Complex64::new(0.0, -1.0 / f.grid.hbar())).with_label("moyal"))
}

fn refine_columns(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (r, c) = m.shape();
    let mut out = DMatrix::zeros(2 * r, c);
    for j in 0..c {
        let col: Vec<Complex64> = m.column(j).iter().copied().collect();
        for (i, v) in refine2(&col).into_iter().enumerate() {
            out[(i, j)] = v;
        }
    }
    out
}

/// Integral representation,
/// `(f*g)(x,p) = (1/pi hbar)^2 int f(x+a', p+b') g(x+c', p+d')
///  exp[(2i/hbar)(a' d' - b' c')] da' db' dc' dd'`.
///
/// `f` is refined onto the half-step grid so that every shift lands on a
/// sample; the sum over the `g` offsets becomes a two-dimensional DFT of a
/// window of the refined `f` per output point.
pub fn star_integral(f: &SampledSymbol, g: &SampledSymbol) -> Result<SampledSymbol> {
    check_pair(f, g)?;
    check_small(f)?;
    let grid = f.grid;
    let n = grid.n();
    let ni = n as i64;
    let f2 = refine_columns(&refine_columns(&f.values).transpose()).transpose();
    let idx = |v: i64, m: i64| v.rem_euclid(m) as usize;
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    let mut patch = DMatrix::<Complex64>::zeros(n, n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..ni {
        for k in 0..ni {
            // patch[j, l] = f2[2i + j, 2k + l], offsets taken mod n
            for j in -ni / 2..ni / 2 {
                for l in -ni / 2..ni / 2 {
                    patch[(idx(j, ni), idx(l, ni))] = f2[(idx(2 * i + j, 2 * ni), idx(2 * k + l, 2 * ni))];
                }
            }
            // F[l', j'] = sum_{j,l} patch[j, l] e^{2 pi i (j l' - l j')/n}:
            // forward transform over l, inverse over j
            for j in 0..n {
                buf.iter_mut().enumerate().for_each(|(l, v)| *v = patch[(j, l)]);
                fft(&mut buf);
                buf.iter().enumerate().for_each(|(jp, v)| patch[(j, jp)] = *v);
            }
            for jp in 0..n {
                buf.iter_mut().enumerate().for_each(|(j, v)| *v = patch[(j, jp)]);
                ifft(&mut buf);
                buf.iter().enumerate().for_each(|(lp, v)| patch[(lp, jp)] = *v);
            }
            let mut s = Complex64::new(0.0, 0.0);
            for jp in -ni / 2..ni / 2 {
                for lp in -ni / 2..ni / 2 {
                    s += g.values[(idx(i + jp, ni), idx(k + lp, ni))] * patch[(idx(lp, ni), idx(jp, ni))];
                }
            }
            out[(i as usize, k as usize)] = s;
        }
    }
    let hb = grid.hbar();
    let pref = (grid.cell() / (2.0 * PI * hb)).powi(2);
    SampledSymbol::new(grid, out * Complex64::new(pref, 0.0), format!("{}*{}", f.label, g.label))
}

/// Partial Fourier transform in `p`, `T[m, s] = (1/2 pi hbar) sum_l f[m, l]
/// e^{i p_l s dx / hbar} dp`, tabulated for `s` modulo `n`.
fn p_transform(f2: &DMatrix<Complex64>, dp: f64, hbar: f64) -> DMatrix<Complex64> {
    let (r, n) = f2.shape();
    let mut t = DMatrix::zeros(r, n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let k = dp / (2.0 * PI * hbar);
    for m in 0..r {
        buf.iter_mut().enumerate().for_each(|(l, v)| *v = f2[(m, l)]);
        ifft(&mut buf);
        for (s, v) in buf.iter().enumerate() {
            t[(m, s)] = *v * if s % 2 == 0 { k } else { -k };
        }
    }
    t
}

/// Star product from the phase-space path integral with `H = 0`, reduced to
/// the two intermediate points where `f` and `g` are evaluated.
///
/// Integrating out the boundary momenta leaves
/// `(f*g)(x,p) = 2 int dy e^{-2iyp/hbar} int du Tf(x+(y+u)/2, y-u) Tg(x+(u-y)/2, u+y)`
/// with `T` the partial Fourier transform of a symbol in `p`. Valid while
/// both symbols are supported in the central half of the momentum range.
pub fn star_path(f: &SampledSymbol, g: &SampledSymbol) -> Result<SampledSymbol> {
    check_pair(f, g)?;
    check_small(f)?;
    let grid = f.grid;
    let n = grid.n();
    let ni = n as i64;
    let (dx, dp, hb) = (grid.dx(), grid.dp(), grid.hbar());
    let tf = p_transform(&refine_columns(&f.values), dp, hb);
    let tg = p_transform(&refine_columns(&g.values), dp, hb);
    let idx = |v: i64, m: i64| v.rem_euclid(m) as usize;
    let ys: Vec<i64> = (-ni / 4..ni / 4).collect();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..ni {
        let inner: Vec<Complex64> = ys
            .iter()
            .map(|&y| {
                (-ni / 2..ni / 2)
                    .map(|u| {
                        tf[(idx(2 * i + y + u, 2 * ni), idx(y - u, ni))]
                            * tg[(idx(2 * i + u - y, 2 * ni), idx(u + y, ni))]
                    })
                    .sum::<Complex64>()
                    * dx
            })
            .collect();
        for l in 0..n {
            let lc = l as f64 - (n / 2) as f64;
            let s: Complex64 = ys
                .iter()
                .zip(&inner)
                .map(|(&y, v)| v * Complex64::from_polar(1.0, -4.0 * PI * y as f64 * lc / n as f64))
                .sum();
            out[(i as usize, l)] = s * (2.0 * dx);
        }
    }
    SampledSymbol::new(grid, out, format!("{}*{}", f.label, g.label))
}
