//! Explicit extremal pairs.
//!
//! Element layout of the canonical pair: pairs `{i, κ+i}` for `i ≤ τ`,
//! singletons `τ+1..=κ`, then the free blocks `X = κ+τ+1..=n'` (A side) and
//! `Y = n'+1..=n` (B side).

use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::bounds::binomial;
use crate::error::{Error, Result};
use crate::family::{CrossPair, Family, SubsetMask, MAX_N};
use crate::spectra::{lattice_points, RationalMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalParams {
    pub n: usize,
    pub ell: usize,
    pub kappa: usize,
    pub tau: usize,
    pub nprime: usize,
}

impl CanonicalParams {
    pub fn new(n: usize, ell: usize, kappa: usize, tau: usize, nprime: usize) -> Result<Self> {
        let p = CanonicalParams {
            n,
            ell,
            kappa,
            tau,
            nprime,
        };
        p.validate()?;
        Ok(p)
    }

    /// `κ = 0` is accepted only for `ℓ = 0`.
    pub fn validate(&self) -> Result<()> {
        let &CanonicalParams {
            n,
            ell,
            kappa,
            tau,
            nprime,
        } = self;
        let bad = |msg: String| Err(Error::Parameter(msg));
        if n == 0 || n > MAX_N {
            return bad(format!("n = {n} outside 1..={MAX_N}"));
        }
        if kappa != 2 * ell && kappa + 1 != 2 * ell {
            return bad(format!("kappa = {kappa} must be 2*ell-1 or 2*ell for ell = {ell}"));
        }
        if tau > kappa {
            return bad(format!("tau = {tau} exceeds kappa = {kappa}"));
        }
        if kappa + tau > nprime || nprime > n {
            return bad(format!(
                "need kappa + tau <= nprime <= n, got {kappa} + {tau}, {nprime}, {n}"
            ));
        }
        Ok(())
    }

    /// `ℓ = 0` with `κ = 0`, outside the range the extremal theorem covers.
    pub fn is_extension(&self) -> bool {
        self.kappa == 0
    }

    /// `C(κ, ℓ) · 2^(n - κ)`.
    pub fn product(&self) -> u128 {
        binomial(self.kappa, self.ell).to_u128().expect("binomial fits u128") << (self.n - self.kappa)
    }
}

impl fmt::Display for CanonicalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(n={}, ell={}, kappa={}, tau={}, nprime={})",
            self.n, self.ell, self.kappa, self.tau, self.nprime
        )
    }
}

/// All legal parameters for `(n, ℓ)`: `κ = 2ℓ` before `κ = 2ℓ - 1`, then
/// `τ` and `n'` ascending.
pub fn legal_params(n: usize, ell: usize) -> Vec<CanonicalParams> {
    let mut out = Vec::new();
    if n == 0 || n > MAX_N {
        return out;
    }
    let kappas: Vec<usize> = if ell == 0 { vec![0] } else { vec![2 * ell, 2 * ell - 1] };
    for kappa in kappas {
        for tau in 0..=kappa {
            for nprime in kappa + tau..=n {
                out.push(CanonicalParams {
                    n,
                    ell,
                    kappa,
                    tau,
                    nprime,
                });
            }
        }
    }
    out
}

fn range_mask(lo: usize, hi: usize) -> SubsetMask {
    // 1-based, inclusive; empty when lo > hi.
    SubsetMask::prefix(hi).difference(SubsetMask::prefix(lo.saturating_sub(1).min(hi)))
}

/// `A = {[2ℓ]}`, `B` = every set meeting `[2ℓ]` in exactly `ℓ` elements.
pub fn acz_pair(n: usize, ell: usize) -> Result<CrossPair> {
    if n < 2 * ell {
        return Err(Error::Parameter(format!("acz pair needs n >= 2*ell, got n = {n}, ell = {ell}")));
    }
    let core = SubsetMask::prefix(2 * ell);
    let a = Family::new(n, [core])?;
    let b = Family::new(
        n,
        (0..=SubsetMask::full(n).bits())
            .map(|bits| SubsetMask::from_bits(bits, n).expect("in range"))
            .filter(|m| m.intersection(core).len() as usize == ell),
    )?;
    let mut p = CrossPair::new(a, b, ell)?;
    p.verify();
    Ok(p)
}

/// Every `ℓ`-subset of `objects`, as unions.
fn unions_of(objects: &[SubsetMask], ell: usize) -> Vec<SubsetMask> {
    let mut out = Vec::new();
    let k = objects.len();
    if ell > k {
        return out;
    }
    for pick in 0u32..(1u32 << k) {
        if pick.count_ones() as usize == ell {
            let u = (0..k)
                .filter(|i| pick >> i & 1 == 1)
                .fold(SubsetMask::EMPTY, |acc, i| acc.union(objects[i]));
            out.push(u);
        }
    }
    out
}

pub fn canonical_pair(p: &CanonicalParams) -> Result<CrossPair> {
    p.validate()?;
    let &CanonicalParams {
        n,
        ell,
        kappa,
        tau,
        nprime,
    } = p;
    let single = |e: usize| SubsetMask::prefix(e).difference(SubsetMask::prefix(e - 1));
    let mut objects: Vec<SubsetMask> = (1..=tau).map(|i| single(i).union(single(kappa + i))).collect();
    objects.extend((tau + 1..=kappa).map(single));
    let x = range_mask(kappa + tau + 1, nprime);
    let y = range_mask(nprime + 1, n);

    let a = Family::new(n, unions_of(&objects, ell))?.times_power_set(x);

    let singles = range_mask(tau + 1, kappa);
    let transversals = (0u32..(1u32 << tau)).map(|choice| {
        (1..=tau).fold(singles, |acc, i| {
            acc.union(if choice >> (i - 1) & 1 == 1 { single(kappa + i) } else { single(i) })
        })
    });
    let b = Family::new(n, transversals)?.times_power_set(y);
    let mut pair = CrossPair::new(a, b, ell)?;
    pair.verify();
    Ok(pair)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixVariant {
    /// Block shape `(I_h 0 I_h / 0 I_{k-h} 0)` against `(-I_h 0 I_h)`.
    Omega,
    /// Signed difference rows with one heavy row; `n = 2k - 1 (+1)`.
    O1,
    /// Two heavy rows; `n = 2k - 2 (+1, +2)`.
    O2,
}

impl MatrixVariant {
    pub const ALL: [MatrixVariant; 3] = [MatrixVariant::Omega, MatrixVariant::O1, MatrixVariant::O2];

    pub fn name(self) -> &'static str {
        match self {
            MatrixVariant::Omega => "omega",
            MatrixVariant::O1 => "o1",
            MatrixVariant::O2 => "o2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixFamilySpec {
    pub variant: MatrixVariant,
    pub k: usize,
    pub h: usize,
    pub n: usize,
    pub ell: usize,
    #[serde(skip)]
    pub b1: SubsetMask,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPair {
    pub spec: MatrixFamilySpec,
    pub ma: RationalMatrix,
    pub mb: RationalMatrix,
}

/// Whether `k` is a legal block size for `(variant, ℓ, n)`.
pub fn matrix_k_is_legal(variant: MatrixVariant, ell: usize, n: usize, k: usize) -> bool {
    if ell == 0 || k == 0 || k >= n || n > MAX_N {
        return false;
    }
    let h = n - k;
    match variant {
        MatrixVariant::Omega => (k == 2 * ell - 1 || k == 2 * ell) && h <= k,
        MatrixVariant::O1 => {
            // n = 2k - 1 + e with e ∈ {0, 1}
            n + 1 >= 2 * k
                && n + 1 - 2 * k <= 1
                && (h + 2 == 2 * ell || h + 1 == 2 * ell)
                && ell < k
        }
        MatrixVariant::O2 => {
            // n = 2k - 2 + e with e ∈ {0, 1, 2}
            n + 2 >= 2 * k
                && n + 2 - 2 * k <= 2
                && (h + 2 == 2 * ell || h + 1 == 2 * ell)
                && ell + 2 <= k
        }
    }
}

/// Legal `k` for `(variant, ℓ, n)`, ascending.
pub fn legal_matrix_ks(variant: MatrixVariant, ell: usize, n: usize) -> Vec<usize> {
    (1..n).filter(|&k| matrix_k_is_legal(variant, ell, n, k)).collect()
}

/// The `count` smallest legal `(ℓ, n)` instances, ordered by `n` then `ℓ`.
pub fn smallest_legal_sizes(variant: MatrixVariant, count: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in 2..=MAX_N {
        for ell in 1..=n {
            if out.len() < count && !legal_matrix_ks(variant, ell, n).is_empty() {
                out.push((ell, n));
            }
        }
    }
    out
}

fn unit(n: usize, col: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[col - 1] = 1;
    v
}

fn add(v: &mut [i64], col: usize, by: i64) {
    v[col - 1] += by;
}

/// The literal block matrices of a matrix-defined family. `k` defaults to
/// the largest legal value.
pub fn matrix_pair_spec(
    variant: MatrixVariant,
    ell: usize,
    n: usize,
    k: Option<usize>,
) -> Result<MatrixPair> {
    let legal = legal_matrix_ks(variant, ell, n);
    let k = match k {
        Some(k) if legal.contains(&k) => k,
        Some(k) => {
            return Err(Error::Parameter(format!(
                "k = {k} is not legal for {} with ell = {ell}, n = {n} (legal: {legal:?})",
                variant.name()
            )))
        }
        None => *legal.last().ok_or_else(|| {
            Error::Parameter(format!(
                "no legal instance of {} with ell = {ell}, n = {n}",
                variant.name()
            ))
        })?,
    };
    let h = n - k;
    let mut a_rows: Vec<Vec<i64>> = Vec::new();
    let mut b_rows: Vec<Vec<i64>> = Vec::new();
    let b1 = match variant {
        MatrixVariant::Omega => {
            for i in 1..=h {
                let mut r = unit(n, i);
                add(&mut r, k + i, 1);
                a_rows.push(r);
            }
            for i in h + 1..=k {
                a_rows.push(unit(n, i));
            }
            for j in 1..=h {
                let mut r = unit(n, k + j);
                add(&mut r, j, -1);
                b_rows.push(r);
            }
            SubsetMask::prefix(k)
        }
        MatrixVariant::O1 => {
            let e = n + 1 - 2 * k;
            for i in 1..k {
                let mut r = unit(n, i);
                add(&mut r, k + i, -1);
                a_rows.push(r);
            }
            let mut heavy = unit(n, k);
            for j in 1..k {
                add(&mut heavy, k + j, 1);
            }
            if e == 1 {
                add(&mut heavy, 2 * k, 1);
            }
            a_rows.push(heavy);
            for j in 1..k {
                let mut r = unit(n, j);
                add(&mut r, k, -1);
                add(&mut r, k + j, 1);
                b_rows.push(r);
            }
            if e == 1 {
                let mut r = unit(n, 2 * k);
                add(&mut r, k, -1);
                b_rows.push(r);
            }
            SubsetMask::prefix(ell).union(range_mask(k + 1, k + ell))
        }
        MatrixVariant::O2 => {
            let e = n + 2 - 2 * k;
            for i in 1..=k - 2 {
                let mut r = unit(n, i);
                add(&mut r, k + i, -1);
                a_rows.push(r);
            }
            for top in [k - 1, k] {
                let mut heavy = unit(n, top);
                for j in k + 1..=n {
                    add(&mut heavy, j, 1);
                }
                a_rows.push(heavy);
            }
            for j in 1..=k - 2 {
                let mut r = unit(n, j);
                add(&mut r, k - 1, -1);
                add(&mut r, k, -1);
                add(&mut r, k + j, 1);
                b_rows.push(r);
            }
            for t in 1..=e {
                let mut r = unit(n, 2 * k - 2 + t);
                add(&mut r, k - 1, -1);
                add(&mut r, k, -1);
                b_rows.push(r);
            }
            SubsetMask::prefix(ell).union(range_mask(k + 1, k + ell))
        }
    };
    debug_assert_eq!(a_rows.len(), k);
    debug_assert_eq!(b_rows.len(), h);
    Ok(MatrixPair {
        spec: MatrixFamilySpec {
            variant,
            k,
            h,
            n,
            ell,
            b1,
        },
        ma: RationalMatrix::from_int_rows(n, &a_rows)?,
        mb: RationalMatrix::from_int_rows(n, &b_rows)?,
    })
}

/// `{0,1}` points of `rowspace(M_A)` and of `χ_{B1} + rowspace(M_B)`, cut
/// down to the largest exactly `ℓ`-cross-intersecting sub-pair: keep the
/// `A` points meeting every `B` point in `ℓ`, then the `B` points meeting
/// every surviving `A` point in `ℓ`.
pub fn expand_matrix_pair(
    ma: &RationalMatrix,
    mb: &RationalMatrix,
    b1: SubsetMask,
    ell: usize,
) -> Result<CrossPair> {
    let n = ma.cols();
    if mb.rows() > 0 && mb.cols() != n {
        return Err(Error::Structural(format!(
            "M_A has {n} columns, M_B has {}",
            mb.cols()
        )));
    }
    if n == 0 || n > MAX_N {
        return Err(Error::Parameter(format!("n = {n} outside 1..={MAX_N}")));
    }
    let mb = if mb.rows() == 0 {
        RationalMatrix::zeros(0, n)
    } else {
        mb.clone()
    };
    let a0 = lattice_points(ma, SubsetMask::EMPTY)?;
    let b0 = lattice_points(&mb, b1)?;
    let meets = |x: SubsetMask, y: SubsetMask| x.intersection(y).len() as usize == ell;
    let a: Vec<SubsetMask> = a0.into_iter().filter(|&x| b0.iter().all(|&y| meets(x, y))).collect();
    let b: Vec<SubsetMask> = b0.into_iter().filter(|&y| a.iter().all(|&x| meets(x, y))).collect();
    let mut p = CrossPair::new(Family::new(n, a)?, Family::new(n, b)?, ell)?;
    p.verify();
    Ok(p)
}

/// Build and expand in one step.
pub fn matrix_pair(variant: MatrixVariant, ell: usize, n: usize, k: Option<usize>) -> Result<(MatrixPair, CrossPair)> {
    let m = matrix_pair_spec(variant, ell, n, k)?;
    let p = expand_matrix_pair(&m.ma, &m.mb, m.spec.b1, ell)?;
    Ok((m, p))
}

/// Integer matrix as rationals; handy for tests and the CLI.
pub fn int_matrix(cols: usize, rows: &[Vec<i64>]) -> Result<RationalMatrix> {
    RationalMatrix::from_int_rows(cols, rows)
}
