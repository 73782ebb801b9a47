//! Short exact sequences of chain complexes over `F_p` and the long exact
//! sequence in homology they induce.

use serde::Serialize;

use crate::chain::{boundary_sign, ChainComplex};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::field::{span_rank, FpMatrix, Prime};
use crate::simplex::Simplex;

/// `0 -> X -> Y -> Z -> 0`, with `inclusion[n] : X_n -> Y_n` and
/// `projection[n] : Y_n -> Z_n`. All three complexes have the same number of
/// degrees.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub x: ChainComplex,
    pub y: ChainComplex,
    pub z: ChainComplex,
    pub inclusion: Vec<FpMatrix>,
    pub projection: Vec<FpMatrix>,
}

/// Chain complex spanned by the given simplex lists, one per degree, with the
/// boundary restricted to them (faces outside the lists are dropped).
fn restricted_chain_complex(p: Prime, basis: &[Vec<Simplex>]) -> ChainComplex {
    let boundaries = (0..basis.len())
        .map(|n| {
            if n == 0 {
                return FpMatrix::zeros(p, 0, basis[0].len());
            }
            let mut m = FpMatrix::zeros(p, basis[n - 1].len(), basis[n].len());
            for (j, q) in basis[n].iter().enumerate() {
                for (i, face) in q.facets() {
                    if let Ok(row) = basis[n - 1].binary_search(&face) {
                        m.set(row, j, boundary_sign(n, i));
                    }
                }
            }
            m
        })
        .collect();
    ChainComplex { p, boundaries }
}

/// Matrix sending each simplex of `from` to the same simplex in `to`, or to
/// zero when absent.
fn selection(p: Prime, from: &[Simplex], to: &[Simplex]) -> FpMatrix {
    let mut m = FpMatrix::zeros(p, to.len(), from.len());
    for (j, s) in from.iter().enumerate() {
        if let Ok(i) = to.binary_search(s) {
            m.set(i, j, 1);
        }
    }
    m
}

impl ShortExactSequence {
    /// The sequence `0 -> C(sub) -> C(whole) -> C(whole)/C(sub) -> 0`.
    pub fn from_pair(whole: &Complex, sub: &Complex, p: Prime) -> Result<Self> {
        if !sub.is_subcomplex_of(whole) {
            return Err(Error::NotASubcomplex("pair needs a subcomplex of the whole".into()));
        }
        let len = whole.dim().map_or(0, |d| d + 1);
        let y_basis: Vec<Vec<Simplex>> = (0..len).map(|n| whole.of_dim(n).to_vec()).collect();
        let x_basis: Vec<Vec<Simplex>> = (0..len).map(|n| sub.of_dim(n).to_vec()).collect();
        let z_basis: Vec<Vec<Simplex>> = y_basis
            .iter()
            .map(|ys| ys.iter().filter(|s| !sub.contains(s)).cloned().collect())
            .collect();
        Ok(Self {
            x: restricted_chain_complex(p, &x_basis),
            y: restricted_chain_complex(p, &y_basis),
            z: restricted_chain_complex(p, &z_basis),
            inclusion: (0..len).map(|n| selection(p, &x_basis[n], &y_basis[n])).collect(),
            projection: (0..len).map(|n| selection(p, &y_basis[n], &z_basis[n])).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Checks the chain-map identities and exactness in every degree.
    pub fn is_exact(&self) -> bool {
        (0..self.len()).all(|n| {
            let f = &self.inclusion[n];
            let g = &self.projection[n];
            let injective = f.rank() == f.cols();
            let surjective = g.rank() == g.rows();
            let middle = g.mul(f).is_zero() && f.rank() + g.rank() == f.rows();
            let commutes = n == 0
                || (self.y.boundaries[n].mul(f) == self.inclusion[n - 1].mul(&self.x.boundaries[n])
                    && self.z.boundaries[n].mul(g) == self.projection[n - 1].mul(&self.y.boundaries[n]));
            injective && surjective && middle && commutes
        })
    }
}

/// Chosen cycle representatives for a homology group, with the means to read
/// off coordinates of any cycle.
struct HomologyBasis {
    reps: Vec<Vec<u32>>,
    /// `[reps | boundaries]`
    combined: FpMatrix,
}

impl HomologyBasis {
    fn new(c: &ChainComplex, n: usize) -> Self {
        let p = c.p;
        let dim = c.rank_of_group(n);
        let boundaries = if n + 1 < c.len() {
            c.boundaries[n + 1].clone()
        } else {
            FpMatrix::zeros(p, dim, 0)
        };
        let mut spanning: Vec<Vec<u32>> = (0..boundaries.cols()).map(|j| boundaries.column(j)).collect();
        let mut rank = span_rank(p, dim, &spanning);
        let mut reps = Vec::new();
        for z in c.boundaries[n].kernel() {
            spanning.push(z.clone());
            let r = span_rank(p, dim, &spanning);
            if r > rank {
                rank = r;
                reps.push(z);
            } else {
                spanning.pop();
            }
        }
        let combined = FpMatrix::from_columns(p, dim, &reps).hstack(&boundaries);
        Self { reps, combined }
    }

    fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of cycle `z`.
    fn coords(&self, z: &[u32]) -> Result<Vec<u32>> {
        let sol = self
            .combined
            .solve(z)
            .ok_or_else(|| Error::Precondition("vector is not a cycle".into()))?;
        Ok(sol[..self.dim()].to_vec())
    }
}

fn induced_map(p: Prime, map: &FpMatrix, from: &HomologyBasis, to: &HomologyBasis) -> Result<FpMatrix> {
    let cols = from
        .reps
        .iter()
        .map(|h| to.coords(&map.apply(h)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FpMatrix::from_columns(p, to.dim(), &cols))
}

/// The maps of the long exact sequence, degree by degree:
/// `alpha[n] : H_n(X) -> H_n(Y)`, `beta[n] : H_n(Y) -> H_n(Z)` and
/// `gamma[n] : H_n(Z) -> H_(n-1)(X)` (`gamma[0]` maps to the zero space).
#[derive(Clone, Debug)]
pub struct LongExactSequence {
    pub dims_x: Vec<usize>,
    pub dims_y: Vec<usize>,
    pub dims_z: Vec<usize>,
    pub alpha: Vec<FpMatrix>,
    pub beta: Vec<FpMatrix>,
    pub gamma: Vec<FpMatrix>,
}

/// Computes every map of the long exact sequence; the connecting maps are
/// built by lifting through the projection, applying the boundary and pulling
/// back through the inclusion.
pub fn long_exact_sequence(ses: &ShortExactSequence) -> Result<LongExactSequence> {
    let p = ses.y.p;
    let len = ses.len();
    let hx: Vec<HomologyBasis> = (0..len).map(|n| HomologyBasis::new(&ses.x, n)).collect();
    let hy: Vec<HomologyBasis> = (0..len).map(|n| HomologyBasis::new(&ses.y, n)).collect();
    let hz: Vec<HomologyBasis> = (0..len).map(|n| HomologyBasis::new(&ses.z, n)).collect();
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut gamma = Vec::new();
    for n in 0..len {
        alpha.push(induced_map(p, &ses.inclusion[n], &hx[n], &hy[n])?);
        beta.push(induced_map(p, &ses.projection[n], &hy[n], &hz[n])?);
        gamma.push(if n == 0 {
            FpMatrix::zeros(p, 0, hz[0].dim())
        } else {
            connecting(ses, n, &hz[n], &hx[n - 1])?
        });
    }
    Ok(LongExactSequence {
        dims_x: hx.iter().map(HomologyBasis::dim).collect(),
        dims_y: hy.iter().map(HomologyBasis::dim).collect(),
        dims_z: hz.iter().map(HomologyBasis::dim).collect(),
        alpha,
        beta,
        gamma,
    })
}

fn connecting(ses: &ShortExactSequence, n: usize, hz: &HomologyBasis, hx: &HomologyBasis) -> Result<FpMatrix> {
    let cols = hz
        .reps
        .iter()
        .map(|z| {
            let y = ses.projection[n]
                .solve(z)
                .ok_or_else(|| Error::Precondition("projection is not surjective".into()))?;
            let dy = ses.y.boundaries[n].apply(&y);
            let x = ses.inclusion[n - 1]
                .solve(&dy)
                .ok_or_else(|| Error::Precondition("boundary of a lift does not come from the subcomplex".into()))?;
            hx.coords(&x)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FpMatrix::from_columns(ses.y.p, hx.dim(), &cols))
}

/// The connecting map `H_n(Z) -> H_(n-1)(X)` for `n >= 1`.
pub fn connecting_homomorphism(ses: &ShortExactSequence, n: usize) -> Result<FpMatrix> {
    if n == 0 || n >= ses.len() {
        return Err(Error::OutOfRange {
            what: "connecting map degree",
            detail: format!("need 1 <= n < {}, got {n}", ses.len()),
        });
    }
    let hz = HomologyBasis::new(&ses.z, n);
    let hx = HomologyBasis::new(&ses.x, n - 1);
    connecting(ses, n, &hz, &hx)
}

/// Exactness at one node of the long exact sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesNode {
    pub label: String,
    pub dim: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub nodes: Vec<LesNode>,
}

impl LesReport {
    pub fn is_exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }
}

fn exact_at(incoming: &FpMatrix, outgoing: &FpMatrix, dim: usize) -> bool {
    outgoing.mul(incoming).is_zero() && incoming.rank() + outgoing.rank() == dim
}

impl LongExactSequence {
    /// Checks `ker = im` at every node by composing consecutive maps and
    /// comparing ranks.
    pub fn report(&self) -> LesReport {
        let p = self.alpha.first().map(FpMatrix::prime);
        let len = self.alpha.len();
        let mut nodes = Vec::new();
        for n in (0..len).rev() {
            let gamma_in = if n + 1 < len {
                self.gamma[n + 1].clone()
            } else {
                FpMatrix::zeros(p.expect("nonempty"), self.dims_x[n], 0)
            };
            nodes.push(LesNode {
                label: format!("H{n}(X)"),
                dim: self.dims_x[n],
                exact: exact_at(&gamma_in, &self.alpha[n], self.dims_x[n]),
            });
            nodes.push(LesNode {
                label: format!("H{n}(Y)"),
                dim: self.dims_y[n],
                exact: exact_at(&self.alpha[n], &self.beta[n], self.dims_y[n]),
            });
            nodes.push(LesNode {
                label: format!("H{n}(Z)"),
                dim: self.dims_z[n],
                exact: exact_at(&self.beta[n], &self.gamma[n], self.dims_z[n]),
            });
        }
        LesReport { nodes }
    }
}

/// Builds the long exact sequence of `ses` and checks exactness everywhere.
pub fn verify_les(ses: &ShortExactSequence) -> Result<LesReport> {
    Ok(long_exact_sequence(ses)?.report())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{standard_complex, StandardKind};
    use crate::simplex;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn edge_relative_to_endpoints() {
        let whole = standard_complex(StandardKind::Full, 1).unwrap();
        let sub = Complex::from_facets([simplex![0], simplex![1]]);
        let ses = ShortExactSequence::from_pair(&whole, &sub, p(3)).unwrap();
        assert!(ses.is_exact());
        let les = long_exact_sequence(&ses).unwrap();
        assert_eq!(les.dims_x, vec![2, 0]);
        assert_eq!(les.dims_y, vec![1, 0]);
        assert_eq!(les.dims_z, vec![0, 1]);
        // the edge class goes to [0] - [1]
        let gamma = connecting_homomorphism(&ses, 1).unwrap();
        assert_eq!((gamma.rows(), gamma.cols()), (2, 1));
        assert!(!gamma.is_zero());
        assert!(les.report().is_exact());

        let mut broken = les.clone();
        let flipped = -(broken.gamma[1].get(1, 0) as i64);
        broken.gamma[1].set(1, 0, flipped);
        assert!(!broken.report().is_exact());

        let mut zeroed = les;
        zeroed.gamma[1] = FpMatrix::zeros(p(3), 2, 1);
        assert!(!zeroed.report().is_exact());
    }

    #[test]
    fn primitive_collapse_quotient_is_acyclic() {
        let whole = standard_complex(StandardKind::Full, 2).unwrap();
        let sub = standard_complex(StandardKind::Horn, 2).unwrap();
        let ses = ShortExactSequence::from_pair(&whole, &sub, p(5)).unwrap();
        let les = long_exact_sequence(&ses).unwrap();
        assert_eq!(les.dims_z, vec![0, 0, 0]);
        assert_eq!(ses.z.rank_of_group(1), 1);
        assert_eq!(ses.z.rank_of_group(2), 1);
        assert!(les.report().is_exact());
    }

    #[test]
    fn sphere_relative_to_a_disk() {
        let whole = standard_complex(StandardKind::Boundary, 3).unwrap();
        let sub = Complex::from_facets([simplex![0, 1, 2]]);
        let ses = ShortExactSequence::from_pair(&whole, &sub, p(2)).unwrap();
        assert!(verify_les(&ses).unwrap().is_exact());
        assert!(ShortExactSequence::from_pair(&sub, &whole, p(2)).is_err());
    }
}
