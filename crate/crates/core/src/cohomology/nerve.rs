//! Nerve complexes of covers by convex hulls, and their reduced
//! cohomology over the rationals.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::lattice_fan::{Fan, LatticeVector};
use crate::linalg;

/// Decides whether `Conv(S_1) ∩ ... ∩ Conv(S_k)` is nonempty.
///
/// Unknowns are convex weights per piece; the barycentres of all pieces
/// are required to agree. Exact rational feasibility, no floating point.
pub fn pieces_intersect(pieces: &[Vec<LatticeVector>]) -> bool {
    if pieces.iter().any(Vec::is_empty) {
        return false;
    }
    if pieces.len() <= 1 {
        return true;
    }
    let n = pieces[0][0].dim();
    let offsets: Vec<usize> = pieces
        .iter()
        .scan(0, |acc, p| {
            let o = *acc;
            *acc += p.len();
            Some(o)
        })
        .collect();
    let vars: usize = pieces.iter().map(Vec::len).sum();
    let rat = |x: &BigInt| BigRational::from_integer(x.clone());
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        let mut row = vec![BigRational::zero(); vars];
        for j in 0..p.len() {
            row[offsets[i] + j] = BigRational::one();
        }
        rows.push(row);
        rhs.push(BigRational::one());
    }
    for (i, p) in pieces.iter().enumerate().skip(1) {
        for k in 0..n {
            let mut row = vec![BigRational::zero(); vars];
            for (j, v) in pieces[0].iter().enumerate() {
                row[j] = rat(&v.0[k]);
            }
            for (j, v) in p.iter().enumerate() {
                row[offsets[i] + j] = -rat(&v.0[k]);
            }
            rows.push(row);
            rhs.push(BigRational::zero());
        }
    }
    linalg::feasible_nonnegative(&rows, &rhs)
}

/// The nerve of the cover of `V_{D,m}` by its convex pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveComplex {
    /// Ray indices spanning each piece (one nerve vertex per distinct piece).
    pub pieces: Vec<Vec<usize>>,
    /// Maximal cones that produced each piece.
    pub piece_cones: Vec<Vec<usize>>,
    /// `simplices[k]` lists the k-simplices as sorted vertex sets.
    pub simplices: Vec<Vec<Vec<usize>>>,
}

impl NerveComplex {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn num_vertices(&self) -> usize {
        self.pieces.len()
    }

    /// Number of connected components of the 1-skeleton.
    pub fn components(&self) -> usize {
        let v = self.num_vertices();
        let mut parent: Vec<usize> = (0..v).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        if let Some(edges) = self.simplices.get(1) {
            for e in edges {
                let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        (0..v).filter(|&x| find(&mut parent, x) == x).count()
    }
}

/// Builds the nerve of the pieces `Conv(active rays of sigma)`.
///
/// `active` flags each ray of the fan. Simplices are enumerated by
/// increasing size; a candidate is tested only when all its facets are
/// present.
pub fn nerve_of_active(fan: &Fan, active: &[bool]) -> NerveComplex {
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    let mut piece_cones: Vec<Vec<usize>> = Vec::new();
    for (ci, cone) in fan.max_cones().iter().enumerate() {
        let piece: Vec<usize> = cone.rays().iter().copied().filter(|&r| active[r]).collect();
        if piece.is_empty() {
            continue;
        }
        match pieces.iter().position(|p| *p == piece) {
            Some(i) => piece_cones[i].push(ci),
            None => {
                pieces.push(piece);
                piece_cones.push(vec![ci]);
            }
        }
    }
    let points: Vec<Vec<LatticeVector>> = pieces
        .iter()
        .map(|p| p.iter().map(|&r| fan.ray(r).clone()).collect())
        .collect();

    let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
    if !pieces.is_empty() {
        simplices.push((0..pieces.len()).map(|i| vec![i]).collect());
    }
    while let Some(level) = simplices.last() {
        let present: HashSet<&Vec<usize>> = level.iter().collect();
        let mut next = Vec::new();
        for s in level {
            let last = *s.last().expect("simplices are nonempty");
            for v in last + 1..pieces.len() {
                let mut cand = s.clone();
                cand.push(v);
                let facets_ok = (0..cand.len() - 1).all(|drop| {
                    let facet: Vec<usize> = cand
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != drop)
                        .map(|(_, &x)| x)
                        .collect();
                    present.contains(&facet)
                });
                if !facets_ok {
                    continue;
                }
                let sub: Vec<Vec<LatticeVector>> =
                    cand.iter().map(|&i| points[i].clone()).collect();
                if pieces_intersect(&sub) {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        simplices.push(next);
    }
    NerveComplex {
        pieces,
        piece_cones,
        simplices,
    }
}

/// Reduced cohomology ranks of a simplicial complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ReducedCohomology {
    /// Rank in degree -1: one for the empty complex, zero otherwise.
    pub minus_one: u64,
    /// `ranks[j]` is the rank in degree `j >= 0`.
    pub ranks: Vec<u64>,
}

impl ReducedCohomology {
    /// Contribution to sheaf cohomology `H^i`, which is reduced degree `i - 1`.
    pub fn sheaf_degree(&self, i: usize) -> u64 {
        if i == 0 {
            self.minus_one
        } else {
            self.ranks.get(i - 1).copied().unwrap_or(0)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.minus_one == 0 && self.ranks.iter().all(|&r| r == 0)
    }

    /// Highest reduced degree with a nonzero rank.
    pub fn top_degree(&self) -> Option<usize> {
        self.ranks.iter().rposition(|&r| r != 0)
    }
}

/// Ranks of the reduced cochain complex over Q.
///
/// `dim C^k - rank d^k - rank d^(k-1)`, with the augmentation
/// `C^(-1) = Q -> C^0` as `d^(-1)`.
pub fn reduced_ranks(c: &NerveComplex) -> ReducedCohomology {
    if c.is_empty() {
        return ReducedCohomology {
            minus_one: 1,
            ranks: Vec::new(),
        };
    }
    let top = c.simplices.len();
    // coboundary_rank[k] = rank of d^k : C^k -> C^(k+1), for k = 0..top-1
    let coboundary_rank: Vec<usize> = (0..top)
        .map(|k| {
            if k + 1 >= top {
                return 0;
            }
            let lower = &c.simplices[k];
            let index: std::collections::HashMap<&Vec<usize>, usize> =
                lower.iter().enumerate().map(|(i, s)| (s, i)).collect();
            let rows: Vec<Vec<BigInt>> = c.simplices[k + 1]
                .iter()
                .map(|s| {
                    let mut row = vec![BigInt::zero(); lower.len()];
                    for drop in 0..s.len() {
                        let face: Vec<usize> = s
                            .iter()
                            .enumerate()
                            .filter(|(p, _)| *p != drop)
                            .map(|(_, &x)| x)
                            .collect();
                        let sign = if drop % 2 == 0 { 1 } else { -1 };
                        row[index[&face]] = BigInt::from(sign);
                    }
                    row
                })
                .collect();
            linalg::rank(rows)
        })
        .collect();
    let ranks = (0..top)
        .map(|k| {
            let below = if k == 0 { 1 } else { coboundary_rank[k - 1] };
            (c.simplices[k].len() - coboundary_rank[k] - below) as u64
        })
        .collect();
    ReducedCohomology {
        minus_one: 0,
        ranks,
    }
}
