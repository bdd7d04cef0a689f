use crate::geom::{Similarity3, Vec3};
use crate::zipper::{root_ball, Address, Zipper};
use serde::{Deserialize, Serialize};

/// Node evaluations after which a search gives up as undecided.
pub const NODE_BUDGET: u64 = 20_000_000;

/// A cylinder `S_a(gamma)` with the ball `S_a(B_0)`, `B_0` the root ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcPiece {
    pub address: Address,
    pub center: Vec3,
    pub radius: f64,
}

impl ArcPiece {
    pub fn new(z: &Zipper, address: &Address) -> crate::Result<ArcPiece> {
        let s = crate::zipper::cylinder_map(z, address)?;
        let (c, r) = root_ball(z);
        Ok(ArcPiece { address: address.clone(), center: s.apply(c), radius: s.ratio * r })
    }
}

/// Outcome of a branch-and-bound separation search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapSearch {
    /// Certified lower bound on the distance between the subarcs, 0 unless
    /// `certified`.
    pub lower_gap: f64,
    pub certified: bool,
    /// Longest address reached.
    pub depth_used: usize,
    /// Smallest `distance - radii` among examined ball pairs; negative when
    /// the search stopped on an overlapping pair.
    pub min_margin: f64,
    pub nodes: u64,
}

impl GapSearch {
    fn trivial() -> GapSearch {
        GapSearch { lower_gap: 0.0, certified: false, depth_used: 0, min_margin: f64::NEG_INFINITY, nodes: 0 }
    }

    /// Combination for a union of piece pairs: the gap is the smallest one.
    pub fn combine(self, o: GapSearch) -> GapSearch {
        let certified = self.certified && o.certified;
        GapSearch {
            lower_gap: if certified { self.lower_gap.min(o.lower_gap) } else { 0.0 },
            certified,
            depth_used: self.depth_used.max(o.depth_used),
            min_margin: self.min_margin.min(o.min_margin),
            nodes: self.nodes + o.nodes,
        }
    }
}

struct Node {
    digits: Vec<u32>,
    map: Similarity3,
}

impl Node {
    fn child(&self, z: &Zipper, d: u32) -> Node {
        let mut digits = self.digits.clone();
        digits.push(d);
        Node { digits, map: self.map.compose(z.map(d as usize)) }
    }
}

/// Certified lower bound on `dist(S_a(gamma), S_b(gamma))`, or 0.
pub fn min_gap(z: &Zipper, a: &Address, b: &Address, max_depth: usize) -> f64 {
    min_gap_search(z, a, b, max_depth).lower_gap
}

/// Refines whichever piece has the larger ball (ties: the lexicographically
/// smaller address) until every ball pair is separated. A pair that would
/// need a piece longer than `max_depth` makes the result undecided. The
/// split sequence does not depend on `max_depth`, so a certified gap is the
/// same for every larger depth.
pub fn min_gap_search(z: &Zipper, a: &Address, b: &Address, max_depth: usize) -> GapSearch {
    let m = z.m();
    if a.check(m).is_err() || b.check(m).is_err() || a.is_prefix_of(b) || b.is_prefix_of(a) {
        return GapSearch::trivial();
    }
    let (c0, r0) = root_ball(z);
    let start = |x: &Address| Node {
        digits: x.digits().to_vec(),
        map: crate::zipper::cylinder_map_unchecked(z, x.digits()),
    };
    let mut stack = vec![(start(a), start(b))];
    let mut out = GapSearch {
        lower_gap: f64::INFINITY,
        certified: true,
        depth_used: a.len().max(b.len()),
        min_margin: f64::INFINITY,
        nodes: 0,
    };
    while let Some((p, q)) = stack.pop() {
        out.nodes += 1;
        let (cp, cq) = (p.map.apply(c0), q.map.apply(c0));
        let (rp, rq) = (p.map.ratio * r0, q.map.ratio * r0);
        let slack = 1e-12 * (1.0 + cp.norm() + cq.norm());
        let margin = cp.dist(cq) - rp - rq - slack;
        out.min_margin = out.min_margin.min(margin);
        if margin > 0.0 {
            out.lower_gap = out.lower_gap.min(margin);
            continue;
        }
        let split_p = rp > rq || (rp == rq && p.digits <= q.digits);
        let piece = if split_p { &p } else { &q };
        if piece.digits.len() >= max_depth || out.nodes >= NODE_BUDGET {
            out.lower_gap = 0.0;
            out.certified = false;
            return out;
        }
        out.depth_used = out.depth_used.max(piece.digits.len() + 1);
        for d in (1..=m as u32).rev() {
            if split_p {
                stack.push((p.child(z, d), Node { digits: q.digits.clone(), map: q.map }));
            } else {
                stack.push((Node { digits: p.digits.clone(), map: p.map }, q.child(z, d)));
            }
        }
    }
    out
}

/// Leaf ball pairs of `S_a(gamma)`, `S_b(gamma)` closer than `eps`, refined
/// until both radii are below `eps` or the address length reaches
/// `max_depth`. Pairs for which `stop` returns true are dropped unrefined.
/// Returns the leaves and whether the node budget ran out.
pub fn near_pairs(
    z: &Zipper,
    a: &Address,
    b: &Address,
    eps: f64,
    max_depth: usize,
    stop: &dyn Fn(&ArcPiece, &ArcPiece) -> bool,
) -> (Vec<(ArcPiece, ArcPiece)>, bool) {
    let m = z.m();
    let (c0, r0) = root_ball(z);
    let piece = |n: &Node| ArcPiece { address: Address::new(n.digits.clone()), center: n.map.apply(c0), radius: n.map.ratio * r0 };
    let start = |x: &Address| Node {
        digits: x.digits().to_vec(),
        map: crate::zipper::cylinder_map_unchecked(z, x.digits()),
    };
    let mut stack = vec![(start(a), start(b))];
    let mut leaves = Vec::new();
    let mut nodes = 0u64;
    while let Some((p, q)) = stack.pop() {
        nodes += 1;
        if nodes > NODE_BUDGET {
            return (leaves, true);
        }
        let (pp, pq) = (piece(&p), piece(&q));
        if pp.center.dist(pq.center) - pp.radius - pq.radius >= eps || stop(&pp, &pq) {
            continue;
        }
        let split_p = pp.radius > pq.radius || (pp.radius == pq.radius && p.digits <= q.digits);
        let small = pp.radius < eps && pq.radius < eps;
        let len = if split_p { p.digits.len() } else { q.digits.len() };
        if small || len >= max_depth {
            leaves.push((pp, pq));
            continue;
        }
        for d in (1..=m as u32).rev() {
            if split_p {
                stack.push((p.child(z, d), Node { digits: q.digits.clone(), map: q.map }));
            } else {
                stack.push((Node { digits: p.digits.clone(), map: p.map }, q.child(z, d)));
            }
        }
    }
    (leaves, false)
}
