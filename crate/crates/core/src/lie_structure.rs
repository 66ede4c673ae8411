//! Operator spaces as Lie algebras under `[x, y] = xy - yx`: closure,
//! center, the quotient by the center, and its Killing form.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::deriv_solver::{solve_gder, Endo};
use crate::exact::{Matrix, Rational, SpanBasis};
use crate::nary_algebra::NaryAlgebra;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("center element {0} is not in the algebra")]
    CenterNotContained(usize),
    #[error("algebra carries no block metadata")]
    MissingBlocks,
    #[error("empty basis")]
    Empty,
}

/// A bracket-closed span of matrices with structure constants
/// `[b_i, b_j] = sum_k c[i][j][k] b_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiePresentation {
    basis: Vec<Endo>,
    structure: Vec<Vec<Vec<Rational>>>,
    extended: bool,
}

fn flat(ms: &[Endo]) -> Vec<Vec<Rational>> {
    ms.iter().map(|m| m.entries().to_vec()).collect()
}

/// Smallest bracket-closed span containing `basis`. Dependent inputs are
/// dropped; commutators outside the span are appended until closed.
pub fn close_under_bracket(basis: &[Endo]) -> Result<LiePresentation, LieError> {
    let first = basis.first().ok_or(LieError::Empty)?;
    let (r, c) = (first.rows(), first.cols());
    let mut gens: Vec<Endo> = Vec::new();
    let mut span = SpanBasis::new(&[vec![Rational::zero(); r * c]]);
    for b in basis {
        if !span.contains(b.entries()) {
            gens.push(b.clone());
            span = SpanBasis::new(&flat(&gens));
        }
    }
    let original = gens.len();
    loop {
        let mut added = false;
        let k = gens.len();
        for i in 0..k {
            for j in i + 1..k {
                let comm = gens[i].commutator(&gens[j]);
                if !span.contains(comm.entries()) {
                    gens.push(comm);
                    span = SpanBasis::new(&flat(&gens));
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    let m = gens.len();
    let mut structure = vec![vec![vec![Rational::zero(); m]; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let comm = gens[i].commutator(&gens[j]);
            let co = span.coordinates(comm.entries()).expect("closed span");
            structure[j][i] = co.iter().map(|x| -x).collect();
            structure[i][j] = co;
        }
    }
    Ok(LiePresentation {
        basis: gens,
        structure,
        extended: m != original,
    })
}

impl LiePresentation {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Endo] {
        &self.basis
    }

    /// `true` when closing the input span needed extra commutators.
    pub fn extended(&self) -> bool {
        self.extended
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Rational>>] {
        &self.structure
    }

    /// Coordinates of `x` in the basis, if `x` lies in the span.
    pub fn coordinates(&self, x: &Endo) -> Option<Vec<Rational>> {
        SpanBasis::new(&flat(&self.basis)).coordinates(x.entries())
    }

    pub fn element(&self, coords: &[Rational]) -> Endo {
        let (r, c) = (self.basis[0].rows(), self.basis[0].cols());
        self.basis
            .iter()
            .zip(coords)
            .filter(|(_, x)| !x.is_zero())
            .fold(Matrix::zeros(r, c), |acc, (b, x)| &acc + &b.scale(x))
    }

    pub fn check_antisymmetry(&self) -> bool {
        let m = self.dim();
        (0..m).all(|i| {
            self.structure[i][i].iter().all(Zero::is_zero)
                && (0..m).all(|j| {
                    self.structure[i][j]
                        .iter()
                        .zip(&self.structure[j][i])
                        .all(|(a, b)| (a + b).is_zero())
                })
        })
    }

    /// `[[b_i,b_j],b_k] + [[b_j,b_k],b_i] + [[b_k,b_i],b_j] = 0` for `i < j < k`;
    /// returns the first failing triple.
    pub fn check_jacobi(&self) -> Result<(), (usize, usize, usize)> {
        let m = self.dim();
        let br = |u: &[Rational], k: usize| -> Vec<Rational> {
            let mut out = vec![Rational::zero(); m];
            for (a, ua) in u.iter().enumerate() {
                if ua.is_zero() {
                    continue;
                }
                for (o, c) in out.iter_mut().zip(&self.structure[a][k]) {
                    if !c.is_zero() {
                        *o += ua * c;
                    }
                }
            }
            out
        };
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let s1 = br(&self.structure[i][j], k);
                    let s2 = br(&self.structure[j][k], i);
                    let s3 = br(&self.structure[k][i], j);
                    if s1
                        .iter()
                        .zip(&s2)
                        .zip(&s3)
                        .any(|((a, b), c)| !(a + b + c).is_zero())
                    {
                        return Err((i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of `ad b_i`; column `j` holds `[b_i, b_j]`.
    pub fn ad(&self, i: usize) -> Matrix {
        let m = self.dim();
        let mut out = Matrix::zeros(m, m);
        for j in 0..m {
            for k in 0..m {
                out[(k, j)] = self.structure[i][j][k].clone();
            }
        }
        out
    }

    /// Center `{x : [x, L] = 0}`, as coordinate vectors.
    pub fn center_coordinates(&self) -> Vec<Vec<Rational>> {
        center_of(&self.structure)
    }
}

/// Kernel of `x -> ([x, b_j])_j` for structure constants `c`.
fn center_of(c: &[Vec<Vec<Rational>>]) -> Vec<Vec<Rational>> {
    let m = c.len();
    if m == 0 {
        return Vec::new();
    }
    let mut sys = Matrix::zeros(m * m, m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                sys[(j * m + k, i)] = c[i][j][k].clone();
            }
        }
    }
    sys.nullspace()
        .into_iter()
        .map(Matrix::into_entries)
        .collect()
}

/// `K_ij = tr(ad b_i ad b_j) = sum_{a,b} c[i][a][b] c[j][b][a]`.
fn killing_of(c: &[Vec<Vec<Rational>>]) -> Matrix {
    let m = c.len();
    let mut k = Matrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let mut s = Rational::zero();
            for (a, row) in c[i].iter().enumerate() {
                for (b, x) in row.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let y = &c[j][b][a];
                    if !y.is_zero() {
                        s += x * y;
                    }
                }
            }
            k[(j, i)] = s.clone();
            k[(i, j)] = s;
        }
    }
    k
}

/// Annihilator (center) of the presentation, as matrices.
pub fn annihilator(l: &LiePresentation) -> Vec<Endo> {
    l.center_coordinates()
        .iter()
        .map(|v| l.element(v))
        .collect()
}

/// Invariants of `L / center`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientReport {
    pub algebra_dim: usize,
    pub annihilator: Vec<Endo>,
    pub quotient_dim: usize,
    pub expected_dim: Option<usize>,
    pub quotient_center_dim: usize,
    pub killing: Matrix,
    pub killing_rank: usize,
    pub extended: bool,
}

impl QuotientReport {
    pub fn center_trivial(&self) -> bool {
        self.quotient_center_dim == 0
    }

    pub fn killing_nondegenerate(&self) -> bool {
        self.killing_rank == self.quotient_dim
    }

    /// Expected dimension, trivial center and nondegenerate Killing form.
    pub fn sl_compatible(&self) -> bool {
        self.expected_dim.is_none_or(|e| e == self.quotient_dim)
            && self.center_trivial()
            && self.killing_nondegenerate()
    }

    /// Every annihilator element is a multiple of the identity.
    pub fn annihilator_is_scalar(&self) -> bool {
        self.annihilator.iter().all(is_scalar)
    }

    pub fn to_json(&self) -> QuotientJson {
        QuotientJson {
            algebra_dim: self.algebra_dim,
            annihilator_dim: self.annihilator.len(),
            annihilator: self.annihilator.iter().map(Matrix::to_strings).collect(),
            annihilator_scalar: self.annihilator_is_scalar(),
            quotient_dim: self.quotient_dim,
            expected_dim: self.expected_dim,
            quotient_center_dim: self.quotient_center_dim,
            killing_rank: self.killing_rank,
            center_trivial: self.center_trivial(),
            killing_nondegenerate: self.killing_nondegenerate(),
            sl_compatible: self.sl_compatible(),
            killing: self.killing.to_strings(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientJson {
    pub algebra_dim: usize,
    pub annihilator_dim: usize,
    pub annihilator: Vec<Vec<Vec<String>>>,
    pub annihilator_scalar: bool,
    pub quotient_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_dim: Option<usize>,
    pub quotient_center_dim: usize,
    pub killing_rank: usize,
    pub center_trivial: bool,
    pub killing_nondegenerate: bool,
    pub sl_compatible: bool,
    pub killing: Vec<Vec<String>>,
}

/// Quotient of `l` by the ideal spanned by `center`. The complement is the
/// set of basis vectors whose coordinates are not pivots of the center's
/// RREF; classes are read off after reducing by the center rows.
pub fn quotient_delta(
    l: &LiePresentation,
    center: &[Endo],
    expected_dim: Option<usize>,
) -> Result<QuotientReport, LieError> {
    let m = l.dim();
    let lspan = SpanBasis::new(&flat(l.basis()));
    let mut ccoords = Vec::new();
    for (i, z) in center.iter().enumerate() {
        ccoords.push(
            lspan
                .coordinates(z.entries())
                .ok_or(LieError::CenterNotContained(i))?,
        );
    }
    let cspan = (!ccoords.is_empty()).then(|| SpanBasis::new(&ccoords));
    let pivots = cspan.as_ref().map_or(&[][..], SpanBasis::pivots);
    let complement: Vec<usize> = (0..m).filter(|j| !pivots.contains(j)).collect();
    let q = complement.len();
    let class = |v: &[Rational]| -> Vec<Rational> {
        let r = cspan
            .as_ref()
            .map_or_else(|| v.to_vec(), |s| s.remainder(v));
        complement.iter().map(|&j| r[j].clone()).collect()
    };
    let mut qc = vec![vec![vec![Rational::zero(); q]; q]; q];
    for (a, &i) in complement.iter().enumerate() {
        for (b, &j) in complement.iter().enumerate() {
            qc[a][b] = class(&l.structure[i][j]);
        }
    }
    let killing = killing_of(&qc);
    let killing_rank = killing.rank();
    Ok(QuotientReport {
        algebra_dim: m,
        annihilator: center.to_vec(),
        quotient_dim: q,
        expected_dim,
        quotient_center_dim: center_of(&qc).len(),
        killing,
        killing_rank,
        extended: l.extended(),
    })
}

/// `GDer(A) / Ann(GDer(A))` with the expected dimension `sum_b (d_b^2 - 1)`
/// over the algebra's blocks (or `d^2 - 1` without block metadata).
pub fn delta_report(alg: &NaryAlgebra) -> Result<QuotientReport, LieError> {
    let gder = solve_gder(alg).heads();
    let l = close_under_bracket(&gder)?;
    let center = annihilator(&l);
    let expected = match alg.blocks() {
        Some(bs) => bs.iter().map(|b| b.len() * b.len() - 1).sum(),
        None => alg.dim() * alg.dim() - 1,
    };
    quotient_delta(&l, &center, Some(expected))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockwiseReport {
    pub blocks: Vec<QuotientReport>,
    pub combined: QuotientReport,
}

/// One quotient report per block plus one for the whole algebra.
pub fn blockwise_delta(alg: &NaryAlgebra) -> Result<BlockwiseReport, LieError> {
    let blocks = alg.blocks().ok_or(LieError::MissingBlocks)?;
    let per_block = (0..blocks.len())
        .map(|i| {
            let sub = alg.block_subalgebra(i).expect("block index in range");
            delta_report(&sub)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BlockwiseReport {
        blocks: per_block,
        combined: delta_report(alg)?,
    })
}

/// Scalar multiple of the identity check used by reports and tests.
pub fn is_scalar(m: &Endo) -> bool {
    m.is_square() && m.is_diagonal() && {
        let d = m.diagonal_entries();
        d.iter().all(|x| *x == d[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int};
    use proptest::prelude::*;

    fn skew3() -> Vec<Endo> {
        [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| &Matrix::unit(3, i, j) - &Matrix::unit(3, j, i))
            .collect()
    }

    fn gl(d: usize) -> Vec<Endo> {
        (0..d)
            .flat_map(|i| (0..d).map(move |j| Matrix::unit(d, i, j)))
            .collect()
    }

    /// Structure constants by brute force: commutator, then solve against the
    /// basis with the dense solver.
    fn oracle_constants(basis: &[Endo]) -> Vec<Vec<Vec<Rational>>> {
        let cols: Vec<Vec<Rational>> = basis.iter().map(|b| b.entries().to_vec()).collect();
        let n = cols[0].len();
        let mut g = Matrix::zeros(n, basis.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                g[(i, j)] = x.clone();
            }
        }
        basis
            .iter()
            .map(|x| {
                basis
                    .iter()
                    .map(|y| {
                        let rhs = Matrix::column(x.commutator(y).into_entries());
                        g.solve(&rhs).unwrap().unwrap().into_entries()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn so3_table() {
        let l = close_under_bracket(&skew3()).unwrap();
        assert_eq!(l.dim(), 3);
        assert!(!l.extended());
        assert_eq!(l.structure_constants(), &oracle_constants(&skew3())[..]);
        assert!(l.check_antisymmetry());
        assert!(l.check_jacobi().is_ok());
        assert!(annihilator(&l).is_empty());
        let q = quotient_delta(&l, &[], Some(3)).unwrap();
        assert!(q.sl_compatible());
        // so_3 Killing form is -2 * identity in this basis
        assert_eq!(q.killing, Matrix::identity(3).scale(&int(-2)));
    }

    #[test]
    fn gl_center_is_scalars() {
        for d in 2..=4 {
            let l = close_under_bracket(&gl(d)).unwrap();
            assert_eq!(l.dim(), d * d);
            let z = annihilator(&l);
            assert_eq!(z.len(), 1);
            assert!(is_scalar(&z[0]));
            let q = quotient_delta(&l, &z, Some(d * d - 1)).unwrap();
            assert!(q.sl_compatible(), "d = {d}");
        }
    }

    #[test]
    fn abelian_span() {
        let l = close_under_bracket(&[Matrix::unit(3, 0, 1)]).unwrap();
        assert_eq!(l.dim(), 1);
        let z = annihilator(&l);
        assert_eq!(z.len(), 1);
        let q = quotient_delta(&l, &z, None).unwrap();
        assert_eq!(q.quotient_dim, 0);
        assert!(q.center_trivial() && q.killing_nondegenerate());
    }

    #[test]
    fn closure_extends_generators() {
        // E_12 and E_21 generate sl_2
        let l = close_under_bracket(&[Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)]).unwrap();
        assert_eq!(l.dim(), 3);
        assert!(l.extended());
        assert!(l.check_jacobi().is_ok());
    }

    #[test]
    fn center_outside_is_rejected() {
        let l = close_under_bracket(&skew3()).unwrap();
        assert_eq!(
            quotient_delta(&l, &[Matrix::identity(3)], None),
            Err(LieError::CenterNotContained(0))
        );
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn ad_is_a_homomorphism_on_gl3() {
        let l = close_under_bracket(&gl(3)).unwrap();
        let c = l.structure_constants();
        for i in 0..l.dim() {
            for j in 0..l.dim() {
                let lhs = (0..l.dim())
                    .filter(|&a| !c[i][j][a].is_zero())
                    .fold(Matrix::zeros(9, 9), |acc, a| {
                        &acc + &l.ad(a).scale(&c[i][j][a])
                    });
                assert_eq!(lhs, l.ad(i).commutator(&l.ad(j)));
            }
        }
    }

    #[test]
    fn simple_delta_is_sl() {
        for n in 2..=3 {
            let q = delta_report(&NaryAlgebra::make_simple(n).unwrap()).unwrap();
            assert_eq!(q.annihilator.len(), 1);
            assert!(q.annihilator_is_scalar());
            assert_eq!(q.quotient_dim, (n + 1) * (n + 1) - 1);
            assert!(q.sl_compatible());
        }
    }

    #[test]
    fn blockwise_on_sums() {
        let a3 = NaryAlgebra::make_simple(2).unwrap();
        let three = NaryAlgebra::direct_sum(&[a3.clone(), a3.clone(), a3]).unwrap();
        let rep = blockwise_delta(&three).unwrap();
        assert_eq!(rep.blocks.len(), 3);
        assert_eq!(rep.combined.quotient_dim, 24);
        assert!(rep.combined.sl_compatible());
        assert!(rep.blocks.iter().all(QuotientReport::sl_compatible));
        let z = NaryAlgebra::zero(2, 3).unwrap();
        assert_eq!(blockwise_delta(&z), Err(LieError::MissingBlocks));
    }

    #[test]
    fn killing_is_symmetric_and_radical_is_kernel() {
        // b = upper triangular 2x2: solvable, Killing form degenerate
        let l = close_under_bracket(&[
            Matrix::unit(2, 0, 0),
            Matrix::unit(2, 0, 1),
            Matrix::unit(2, 1, 1),
        ])
        .unwrap();
        let q = quotient_delta(&l, &annihilator(&l), None).unwrap();
        assert_eq!(q.killing, q.killing.transpose());
        assert_eq!(q.killing.nullspace().len(), q.quotient_dim - q.killing_rank);
        assert!(!q.killing_nondegenerate());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn random_pairs_close_and_satisfy_jacobi(
            a in proptest::collection::vec(-2i64..=2, 9),
            b in proptest::collection::vec(-2i64..=2, 9),
        ) {
            let m = |v: &[i64]| Matrix::new(3, 3, v.iter().map(|&x| frac(x, 1)).collect()).unwrap();
            let (x, y) = (m(&a), m(&b));
            prop_assume!(!x.is_zero() && !y.is_zero());
            let l = close_under_bracket(&[x, y]).unwrap();
            prop_assert!(l.check_antisymmetry());
            prop_assert!(l.check_jacobi().is_ok());
            for u in l.basis() {
                for v in l.basis() {
                    prop_assert!(l.coordinates(&u.commutator(v)).is_some());
                }
            }
        }
    }
}
