//! Matroid oracles and the exchange graph: maximal codependent pairs,
//! couples of fixed elements, isolated vertices and the classification of
//! connected components by their two invariants.
//!
//! Ground elements are 0-based indices; subsets are sorted vectors at the
//! API surface and bitmasks internally, which caps the ground size at 20.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::Rng;

use crate::exact_linalg::IntMatrix;
use crate::{Error, Result};

const MASK_GROUND_LIMIT: usize = 20;
const TABLE_GROUND_LIMIT: usize = 16;
const DEFAULT_CLASSIFY_BOUND: usize = 10;

/// A matroid given by an exact rank oracle over a small ground set.
#[derive(Clone, Debug)]
pub struct MatroidView {
    n: usize,
    backend: Backend,
}

#[derive(Clone, Debug)]
enum Backend {
    /// Rank of every subset, indexed by bitmask.
    Table { ranks: Vec<u8> },
    /// Every subset of size at most `r` is independent.
    Uniform { r: usize },
}

impl MatroidView {
    /// Column matroid of an integer matrix: a subset is independent when
    /// the corresponding columns are linearly independent.
    pub fn linear(matrix: &IntMatrix) -> Result<Self> {
        let n = matrix.cols();
        if n > TABLE_GROUND_LIMIT {
            return Err(Error::SizeGuard(format!(
                "linear matroid on {n} elements exceeds the limit of {TABLE_GROUND_LIMIT}"
            )));
        }
        let mut ranks = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            let cols: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let rank = matrix.select_columns(&cols)?.rank();
            ranks.push(rank as u8);
        }
        Ok(MatroidView { n, backend: Backend::Table { ranks } })
    }

    /// Uniform matroid: subsets of size at most `r` are independent.
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        if r > n {
            return Err(Error::InvalidInput(format!(
                "uniform rank {r} exceeds ground size {n}"
            )));
        }
        if n > MASK_GROUND_LIMIT {
            return Err(Error::SizeGuard(format!(
                "ground size {n} exceeds the limit of {MASK_GROUND_LIMIT}"
            )));
        }
        Ok(MatroidView { n, backend: Backend::Uniform { r } })
    }

    /// Cycle matroid of a multigraph on 1-based vertices: an edge subset is
    /// independent when it contains no cycle.
    pub fn graphic(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let n = edges.len();
        if n > TABLE_GROUND_LIMIT {
            return Err(Error::SizeGuard(format!(
                "graphic matroid on {n} edges exceeds the limit of {TABLE_GROUND_LIMIT}"
            )));
        }
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > vertex_count || v > vertex_count {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) outside vertices 1..={vertex_count}"
                )));
            }
        }
        let mut ranks = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            ranks.push(graph_rank(vertex_count, edges, mask) as u8);
        }
        Ok(MatroidView { n, backend: Backend::Table { ranks } })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    /// Rank of the whole ground set.
    pub fn rank(&self) -> usize {
        self.rank_mask(self.full_mask())
    }

    fn full_mask(&self) -> u32 {
        if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 }
    }

    fn rank_mask(&self, mask: u32) -> usize {
        match &self.backend {
            Backend::Table { ranks } => ranks[mask as usize] as usize,
            Backend::Uniform { r } => (mask.count_ones() as usize).min(*r),
        }
    }

    fn independent_mask(&self, mask: u32) -> bool {
        self.rank_mask(mask) == mask.count_ones() as usize
    }

    fn closure_mask(&self, mask: u32) -> u32 {
        let base = self.rank_mask(mask);
        let mut out = mask;
        for i in 0..self.n {
            let bit = 1u32 << i;
            if mask & bit == 0 && self.rank_mask(mask | bit) == base {
                out |= bit;
            }
        }
        out
    }

    fn mask_of(&self, subset: &[usize]) -> Result<u32> {
        let mut mask = 0u32;
        for &e in subset {
            if e >= self.n {
                return Err(Error::IndexOutOfRange(format!(
                    "element {e} outside ground set 0..{}",
                    self.n
                )));
            }
            let bit = 1u32 << e;
            if mask & bit != 0 {
                return Err(Error::InvalidInput(format!("element {e} repeated")));
            }
            mask |= bit;
        }
        Ok(mask)
    }

    fn subset_of(&self, mask: u32) -> Vec<usize> {
        (0..self.n).filter(|i| mask >> i & 1 == 1).collect()
    }

    pub fn rank_of(&self, subset: &[usize]) -> Result<usize> {
        Ok(self.rank_mask(self.mask_of(subset)?))
    }

    pub fn is_independent(&self, subset: &[usize]) -> Result<bool> {
        Ok(self.independent_mask(self.mask_of(subset)?))
    }

    /// Elements whose addition does not raise the rank.
    pub fn closure(&self, subset: &[usize]) -> Result<Vec<usize>> {
        Ok(self.subset_of(self.closure_mask(self.mask_of(subset)?)))
    }

    /// Elements independent from the subset: the complement of the closure.
    pub fn free_elements(&self, subset: &[usize]) -> Result<Vec<usize>> {
        let cl = self.closure_mask(self.mask_of(subset)?);
        Ok(self.subset_of(self.full_mask() & !cl))
    }

    /// All independent sets, in bitmask order.
    pub fn independents(&self) -> Vec<Vec<usize>> {
        (0..1u32 << self.n)
            .filter(|&m| self.independent_mask(m))
            .map(|m| self.subset_of(m))
            .collect()
    }

    /// All maximal independent sets, in bitmask order.
    pub fn bases(&self) -> Vec<Vec<usize>> {
        let r = self.rank();
        (0..1u32 << self.n)
            .filter(|&m| m.count_ones() as usize == r && self.independent_mask(m))
            .map(|m| self.subset_of(m))
            .collect()
    }

    /// Checks the independence axioms: the empty set is independent,
    /// independence is hereditary, and a smaller independent set can always
    /// be augmented from a larger one. Exhaustive up to 8 elements, sampled
    /// with the given seed above that.
    pub fn validate_axioms(&self, seed: u64) -> Result<()> {
        if !self.independent_mask(0) {
            return Err(Error::IdentityFailure("empty set must be independent".into()));
        }
        let check_pair = |a: u32, b: u32| -> Result<()> {
            if self.independent_mask(a) {
                // Hereditary: dropping any element keeps independence.
                for i in 0..self.n {
                    let bit = 1u32 << i;
                    if a & bit != 0 && !self.independent_mask(a & !bit) {
                        return Err(Error::IdentityFailure(
                            "independence is not hereditary".into(),
                        ));
                    }
                }
            }
            if self.independent_mask(a)
                && self.independent_mask(b)
                && b.count_ones() < a.count_ones()
            {
                let can_augment = (0..self.n).any(|i| {
                    let bit = 1u32 << i;
                    a & bit != 0 && b & bit == 0 && self.independent_mask(b | bit)
                });
                if !can_augment {
                    return Err(Error::IdentityFailure("augmentation failed".into()));
                }
            }
            Ok(())
        };
        if self.n <= 8 {
            for a in 0..1u32 << self.n {
                for b in 0..1u32 << self.n {
                    check_pair(a, b)?;
                }
            }
        } else {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let full = self.full_mask();
            for _ in 0..2000 {
                check_pair(rng.gen::<u32>() & full, rng.gen::<u32>() & full)?;
            }
        }
        Ok(())
    }
}

fn graph_rank(vertex_count: usize, edges: &[(usize, usize)], mask: u32) -> usize {
    let mut parent: Vec<usize> = (0..=vertex_count).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut rank = 0;
    for (idx, &(u, v)) in edges.iter().enumerate() {
        if mask >> idx & 1 == 1 {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
                rank += 1;
            }
        }
    }
    rank
}

/// A vertex of the exchange graph: an ordered pair of independent sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExchangePair {
    first: Vec<usize>,
    second: Vec<usize>,
}

impl ExchangePair {
    pub fn new(m: &MatroidView, first: &[usize], second: &[usize]) -> Result<Self> {
        let (a, b) = (m.mask_of(first)?, m.mask_of(second)?);
        if !m.independent_mask(a) || !m.independent_mask(b) {
            return Err(Error::InvalidInput(
                "both components of an exchange pair must be independent".into(),
            ));
        }
        Ok(ExchangePair { first: m.subset_of(a), second: m.subset_of(b) })
    }

    pub fn first(&self) -> &[usize] {
        &self.first
    }

    pub fn second(&self) -> &[usize] {
        &self.second
    }

    /// The multiset union, sorted with repeats.
    pub fn multiset(&self) -> Vec<usize> {
        let mut all = self.first.clone();
        all.extend_from_slice(&self.second);
        all.sort_unstable();
        all
    }

    fn masks(&self) -> (u32, u32) {
        let a = self.first.iter().fold(0u32, |acc, &e| acc | 1 << e);
        let b = self.second.iter().fold(0u32, |acc, &e| acc | 1 << e);
        (a, b)
    }

    fn from_masks(m: &MatroidView, a: u32, b: u32) -> Self {
        ExchangePair { first: m.subset_of(a), second: m.subset_of(b) }
    }
}

/// Which exchange graph to walk: the whole graph, or the bipartite layer
/// on size patterns (p, q) and (p-1, q+1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphSelector {
    Full,
    Layer { p: usize, q: usize },
}

impl GraphSelector {
    fn validate(&self, m: &MatroidView) -> Result<()> {
        if let GraphSelector::Layer { p, q } = *self {
            let r = m.rank();
            if p == 0 || p > r || q >= r {
                return Err(Error::InvalidInput(format!(
                    "layer (p, q) = ({p}, {q}) needs 1 <= p <= {r} and q < {r}"
                )));
            }
        }
        Ok(())
    }

    fn admits(&self, a: u32, b: u32) -> bool {
        match *self {
            GraphSelector::Full => true,
            GraphSelector::Layer { p, q } => {
                let (sa, sb) = (a.count_ones() as usize, b.count_ones() as usize);
                (sa, sb) == (p, q) || (sa + 1, sb) == (p, q + 1)
            }
        }
    }
}

fn neighbor_masks(
    m: &MatroidView,
    a: u32,
    b: u32,
    selector: GraphSelector,
) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for i in 0..m.n {
        let bit = 1u32 << i;
        // Move i from the second component to the first.
        if b & bit != 0 && a & bit == 0 && m.independent_mask(a | bit) {
            let (na, nb) = (a | bit, b & !bit);
            if selector.admits(na, nb) {
                out.push((na, nb));
            }
        }
        // Move i from the first component to the second.
        if a & bit != 0 && b & bit == 0 && m.independent_mask(b | bit) {
            let (na, nb) = (a & !bit, b | bit);
            if selector.admits(na, nb) {
                out.push((na, nb));
            }
        }
    }
    out
}

/// All vertices adjacent to `v` in the full exchange graph, sorted.
pub fn neighbors(m: &MatroidView, v: &ExchangePair) -> Vec<ExchangePair> {
    let (a, b) = v.masks();
    let mut out: Vec<ExchangePair> = neighbor_masks(m, a, b, GraphSelector::Full)
        .into_iter()
        .map(|(na, nb)| ExchangePair::from_masks(m, na, nb))
        .collect();
    out.sort();
    out
}

/// Maximal codependent pair of (I, J): the unique largest (U, V) inside
/// (I, J) with cl(U) = cl(V), computed by the decreasing fixed-point
/// iteration U <- I intersect cl(V), V <- J intersect cl(U).
pub fn mcp(m: &MatroidView, v: &ExchangePair) -> ExchangePair {
    let (i_mask, j_mask) = v.masks();
    let (mut a, mut b) = (i_mask, j_mask);
    loop {
        let next_a = i_mask & m.closure_mask(b);
        let next_b = j_mask & m.closure_mask(next_a);
        if (next_a, next_b) == (a, b) {
            break;
        }
        a = next_a;
        b = next_b;
    }
    // The fixed point is itself codependent; anything else is a bug.
    assert_eq!(m.closure_mask(a), m.closure_mask(b), "fixed point must be codependent");
    ExchangePair::from_masks(m, a, b)
}

/// Reference implementation of the maximal codependent pair by exhaustive
/// search over all subset pairs. Quadratic-exponential; small inputs only.
pub fn mcp_exhaustive(m: &MatroidView, v: &ExchangePair) -> Result<ExchangePair> {
    let (i_mask, j_mask) = v.masks();
    let sizes = i_mask.count_ones() + j_mask.count_ones();
    if sizes > 16 {
        return Err(Error::SizeGuard(format!(
            "exhaustive MCP over {sizes} elements is too large"
        )));
    }
    let mut best = (0u32, 0u32);
    let mut all = Vec::new();
    let mut u = i_mask;
    loop {
        let mut w = j_mask;
        loop {
            if m.closure_mask(u) == m.closure_mask(w) {
                all.push((u, w));
                best = (best.0 | u, best.1 | w);
            }
            if w == 0 {
                break;
            }
            w = (w - 1) & j_mask;
        }
        if u == 0 {
            break;
        }
        u = (u - 1) & i_mask;
    }
    // The union of all codependent pairs must itself be codependent and
    // contain each of them.
    if m.closure_mask(best.0) != m.closure_mask(best.1) {
        return Err(Error::IdentityFailure(
            "union of codependent pairs is not codependent".into(),
        ));
    }
    if !all.iter().all(|&(u, w)| u & best.0 == u && w & best.1 == w) {
        return Err(Error::IdentityFailure(
            "codependent pairs are not all contained in the union".into(),
        ));
    }
    Ok(ExchangePair::from_masks(m, best.0, best.1))
}

fn component_masks(
    m: &MatroidView,
    start: (u32, u32),
    selector: GraphSelector,
) -> Vec<(u32, u32)> {
    let mut seen: HashMap<(u32, u32), ()> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(start, ());
    queue.push_back(start);
    let mut out = vec![start];
    while let Some((a, b)) = queue.pop_front() {
        for next in neighbor_masks(m, a, b, selector) {
            if seen.insert(next, ()).is_none() {
                queue.push_back(next);
                out.push(next);
            }
        }
    }
    out
}

/// Couple of fixed elements: componentwise intersection over the connected
/// component of `v` in the layer graph for (p, q).
pub fn cfe(m: &MatroidView, v: &ExchangePair, p: usize, q: usize) -> Result<ExchangePair> {
    let selector = GraphSelector::Layer { p, q };
    selector.validate(m)?;
    let (a, b) = v.masks();
    if !selector.admits(a, b) {
        return Err(Error::InvalidInput(format!(
            "vertex sizes ({}, {}) lie outside layer ({p}, {q})",
            a.count_ones(),
            b.count_ones()
        )));
    }
    let mut first = u32::MAX;
    let mut second = u32::MAX;
    for (u, w) in component_masks(m, (a, b), selector) {
        first &= u;
        second &= w;
    }
    Ok(ExchangePair::from_masks(m, first, second))
}

/// Whether `v` has no neighbor under the selector. The closure-based
/// characterizations of isolation are asserted on every call: isolation in
/// the full graph means cl(I) = cl(J); isolation in a layer means the
/// larger-rank side sits inside the closure of the other; and a layer with
/// p = q + 1 never has isolated vertices.
pub fn is_isolated(m: &MatroidView, v: &ExchangePair, selector: GraphSelector) -> Result<bool> {
    selector.validate(m)?;
    let (a, b) = v.masks();
    if !selector.admits(a, b) {
        return Err(Error::InvalidInput("vertex lies outside the selected graph".into()));
    }
    let isolated = neighbor_masks(m, a, b, selector).is_empty();
    match selector {
        GraphSelector::Full => {
            assert_eq!(
                isolated,
                m.closure_mask(a) == m.closure_mask(b),
                "isolation in the full graph must match closure equality"
            );
        }
        GraphSelector::Layer { p, q } => {
            let expected = if (a.count_ones() as usize, b.count_ones() as usize) == (p, q) {
                a & !m.closure_mask(b) == 0
            } else {
                b & !m.closure_mask(a) == 0
            };
            assert_eq!(isolated, expected, "layer isolation must match the closure test");
            if p == q + 1 {
                assert!(!isolated, "a layer with p = q + 1 has no isolated vertex");
            }
        }
    }
    Ok(isolated)
}

/// One connected component of an exchange graph.
#[derive(Clone, Debug)]
pub struct ComponentInfo {
    /// Smallest vertex of the component in canonical order.
    pub representative: ExchangePair,
    pub size: usize,
    /// Multiset union shared by every vertex of the component.
    pub multiset: Vec<usize>,
    /// Maximal codependent pair shared by every vertex of the component.
    pub mcp: ExchangePair,
    pub isolated: bool,
}

/// Full component decomposition of an exchange graph.
#[derive(Clone, Debug)]
pub struct Classification {
    pub components: Vec<ComponentInfo>,
    pub vertex_count: usize,
}

/// Decomposes the selected exchange graph into connected components and
/// checks the invariant classification: the pair (multiset, MCP) is
/// constant on every component, and distinct components carry distinct
/// pairs (ignoring isolated vertices on layers with p != q + 1, where the
/// classification theorem does not cover them).
pub fn classify_components(m: &MatroidView, selector: GraphSelector) -> Result<Classification> {
    classify_components_with_bound(m, selector, DEFAULT_CLASSIFY_BOUND)
}

pub fn classify_components_with_bound(
    m: &MatroidView,
    selector: GraphSelector,
    bound: usize,
) -> Result<Classification> {
    selector.validate(m)?;
    if m.n > bound {
        return Err(Error::SizeGuard(format!(
            "classification on {} elements exceeds the bound of {bound}",
            m.n
        )));
    }
    let mut vertices: Vec<(u32, u32)> = Vec::new();
    for a in 0..1u32 << m.n {
        if !m.independent_mask(a) {
            continue;
        }
        for b in 0..1u32 << m.n {
            if m.independent_mask(b) && selector.admits(a, b) {
                vertices.push((a, b));
            }
        }
    }
    let mut visited: HashMap<(u32, u32), usize> = HashMap::new();
    let mut components = Vec::new();
    for &start in &vertices {
        if visited.contains_key(&start) {
            continue;
        }
        let members = component_masks(m, start, selector);
        let id = components.len();
        let rep_masks = *members.iter().min().expect("component is nonempty");
        let representative = ExchangePair::from_masks(m, rep_masks.0, rep_masks.1);
        let multiset = representative.multiset();
        let pair_mcp = mcp(m, &representative);
        for &member in &members {
            visited.insert(member, id);
            let pair = ExchangePair::from_masks(m, member.0, member.1);
            if pair.multiset() != multiset || mcp(m, &pair) != pair_mcp {
                return Err(Error::IdentityFailure(
                    "component invariants changed along an edge".into(),
                ));
            }
        }
        components.push(ComponentInfo {
            representative,
            size: members.len(),
            multiset,
            mcp: pair_mcp,
            isolated: members.len() == 1,
        });
    }
    // Distinct components must carry distinct invariant pairs wherever the
    // classification applies.
    let skip_isolated = matches!(selector, GraphSelector::Layer { p, q } if p != q + 1);
    let mut by_label: BTreeMap<(Vec<usize>, ExchangePair), usize> = BTreeMap::new();
    for info in &components {
        if skip_isolated && info.isolated {
            continue;
        }
        let label = (info.multiset.clone(), info.mcp.clone());
        if by_label.insert(label, 1).is_some() {
            return Err(Error::IdentityFailure(
                "two components share the same invariant pair".into(),
            ));
        }
    }
    Ok(Classification { components, vertex_count: vertices.len() })
}

/// Least subset of the independent set `u` whose closure contains `i`,
/// found by greedy element removal.
pub fn least_closure_witness(m: &MatroidView, u: &[usize], i: usize) -> Result<Vec<usize>> {
    let u_mask = m.mask_of(u)?;
    if !m.independent_mask(u_mask) {
        return Err(Error::InvalidInput("witness base set must be independent".into()));
    }
    if i >= m.n {
        return Err(Error::IndexOutOfRange(format!("element {i} outside the ground set")));
    }
    let target = 1u32 << i;
    if m.closure_mask(u_mask) & target == 0 {
        return Err(Error::InvalidInput(
            "element is not in the closure of the given set".into(),
        ));
    }
    let mut current = u_mask;
    loop {
        let mut shrunk = false;
        for e in 0..m.n {
            let bit = 1u32 << e;
            if current & bit != 0 && m.closure_mask(current & !bit) & target != 0 {
                current &= !bit;
                shrunk = true;
            }
        }
        if !shrunk {
            break;
        }
    }
    Ok(m.subset_of(current))
}

/// Observation report for the extended exchange graph on basis pairs.
#[derive(Clone, Debug)]
pub struct GrrProbe {
    pub vertex_count: usize,
    pub component_count: usize,
    pub invariant_class_count: usize,
    /// Whether invariant classes coincided with components on this instance.
    pub matches: bool,
}

/// Probes the top-layer analogue of the exchange graph, where the second
/// component is allowed to be a spanning set one element larger than a
/// basis. Reports whether the two component invariants classified the
/// connected components on this instance; no general claim is made.
pub fn grr_probe(m: &MatroidView) -> Result<GrrProbe> {
    if m.n > DEFAULT_CLASSIFY_BOUND {
        return Err(Error::SizeGuard(format!(
            "probe on {} elements exceeds the bound of {DEFAULT_CLASSIFY_BOUND}",
            m.n
        )));
    }
    let r = m.rank();
    let full = m.full_mask();
    let spanning = |mask: u32| m.rank_mask(mask) == r;
    // Vertices: two bases, or an independent of size r - 1 with a spanning
    // set of size r + 1.
    let mut vertices: Vec<(u32, u32)> = Vec::new();
    for a in 0..=full {
        for b in 0..=full {
            let (sa, sb) = (a.count_ones() as usize, b.count_ones() as usize);
            let top = sa == r && sb == r && m.independent_mask(a) && m.independent_mask(b);
            let lower = sa + 1 == r
                && sb == r + 1
                && m.independent_mask(a)
                && spanning(b);
            if top || lower {
                vertices.push((a, b));
            }
        }
    }
    let in_graph = |a: u32, b: u32| {
        let (sa, sb) = (a.count_ones() as usize, b.count_ones() as usize);
        (sa == r && sb == r && m.independent_mask(a) && m.independent_mask(b))
            || (sa + 1 == r && sb == r + 1 && m.independent_mask(a) && spanning(b))
    };
    let probe_neighbors = |a: u32, b: u32| {
        let mut out = Vec::new();
        for i in 0..m.n {
            let bit = 1u32 << i;
            if b & bit != 0 && a & bit == 0 && in_graph(a | bit, b & !bit) {
                out.push((a | bit, b & !bit));
            }
            if a & bit != 0 && b & bit == 0 && in_graph(a & !bit, b | bit) {
                out.push((a & !bit, b | bit));
            }
        }
        out
    };
    // BFS components.
    let mut component_of: HashMap<(u32, u32), usize> = HashMap::new();
    let mut component_count = 0;
    for &start in &vertices {
        if component_of.contains_key(&start) {
            continue;
        }
        let id = component_count;
        component_count += 1;
        let mut queue = VecDeque::new();
        component_of.insert(start, id);
        queue.push_back(start);
        while let Some((a, b)) = queue.pop_front() {
            for next in probe_neighbors(a, b) {
                if !component_of.contains_key(&next) {
                    component_of.insert(next, id);
                    queue.push_back(next);
                }
            }
        }
    }
    // Invariant classes: multiset plus the closure fixed point, computed
    // exactly as for ordinary vertices.
    let mut classes: BTreeMap<(Vec<u32>, (u32, u32)), Vec<usize>> = BTreeMap::new();
    for &(a, b) in &vertices {
        let (i_mask, j_mask) = (a, b);
        let (mut u, mut w) = (i_mask, j_mask);
        loop {
            let nu = i_mask & m.closure_mask(w);
            let nw = j_mask & m.closure_mask(nu);
            if (nu, nw) == (u, w) {
                break;
            }
            u = nu;
            w = nw;
        }
        let mut multiset: Vec<u32> = Vec::new();
        for e in 0..m.n as u32 {
            for _ in 0..((a >> e & 1) + (b >> e & 1)) {
                multiset.push(e);
            }
        }
        classes
            .entry((multiset, (u, w)))
            .or_default()
            .push(component_of[&(a, b)]);
    }
    let mut matches = classes.len() == component_count;
    for ids in classes.values() {
        if ids.iter().any(|&id| id != ids[0]) {
            matches = false;
        }
    }
    Ok(GrrProbe {
        vertex_count: vertices.len(),
        component_count,
        invariant_class_count: classes.len(),
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;

    fn pair(m: &MatroidView, a: &[usize], b: &[usize]) -> ExchangePair {
        ExchangePair::new(m, a, b).unwrap()
    }

    #[test]
    fn closure_examples() {
        let u24 = MatroidView::uniform(2, 4).unwrap();
        assert_eq!(u24.closure(&[0]).unwrap(), vec![0]);
        assert_eq!(u24.closure(&[]).unwrap(), Vec::<usize>::new());
        let parallel = MatroidView::linear(&fixtures::parallel_pair_matrix()).unwrap();
        assert_eq!(parallel.closure(&[0]).unwrap(), vec![0, 1]);
        assert_eq!(parallel.free_elements(&[0]).unwrap(), vec![2]);
    }

    #[test]
    fn backends_agree_on_the_triangle() {
        let graphic = MatroidView::graphic(3, &[(1, 2), (1, 3), (2, 3)]).unwrap();
        let linear =
            MatroidView::linear(&fixtures::triangle_graph().top_boundary()).unwrap();
        assert_eq!(graphic.rank(), 2);
        assert_eq!(graphic.bases(), linear.bases());
        assert_eq!(graphic.independents(), linear.independents());
    }

    #[test]
    fn axioms_hold_on_all_backends() {
        for m in [
            MatroidView::uniform(2, 5).unwrap(),
            MatroidView::linear(&fixtures::parallel_pair_matrix()).unwrap(),
            MatroidView::graphic(4, &[(1, 2), (2, 3), (3, 4), (1, 4), (1, 3)]).unwrap(),
        ] {
            m.validate_axioms(101).unwrap();
        }
    }

    #[test]
    fn exchange_pair_rejects_dependent_components() {
        let u24 = MatroidView::uniform(2, 4).unwrap();
        assert!(ExchangePair::new(&u24, &[0, 1, 2], &[3]).is_err());
    }

    #[test]
    fn neighbor_enumeration_matches_hand_counts() {
        let u24 = MatroidView::uniform(2, 4).unwrap();
        let empty = pair(&u24, &[], &[]);
        assert!(neighbors(&u24, &empty).is_empty());
        let v = pair(&u24, &[0, 1], &[2]);
        let expected = vec![pair(&u24, &[0], &[1, 2]), pair(&u24, &[1], &[0, 2])];
        assert_eq!(neighbors(&u24, &v), expected);
    }

    #[test]
    fn mcp_examples() {
        let u24 = MatroidView::uniform(2, 4).unwrap();
        let v = pair(&u24, &[0, 1], &[2]);
        assert_eq!(mcp(&u24, &v), pair(&u24, &[], &[]));
        let parallel = MatroidView::linear(&fixtures::parallel_pair_matrix()).unwrap();
        let w = pair(&parallel, &[0, 2], &[1]);
        assert_eq!(mcp(&parallel, &w), pair(&parallel, &[0], &[1]));
        let diag = pair(&u24, &[1, 3], &[1, 3]);
        assert_eq!(mcp(&u24, &diag), diag);
    }

    #[test]
    fn fixed_point_mcp_matches_exhaustive_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(103);
        for _ in 0..15 {
            let rows = rng.gen_range(2..4);
            let m = fixtures::random_int_matrix(&mut rng, rows, 6, 2);
            let matroid = MatroidView::linear(&m).unwrap();
            let independents = matroid.independents();
            for _ in 0..20 {
                let i = &independents[rng.gen_range(0..independents.len())];
                let j = &independents[rng.gen_range(0..independents.len())];
                let v = pair(&matroid, i, j);
                assert_eq!(mcp(&matroid, &v), mcp_exhaustive(&matroid, &v).unwrap());
            }
        }
    }

    #[test]
    fn cfe_agrees_with_mcp_off_isolated_vertices() {
        let parallel = MatroidView::linear(&fixtures::parallel_pair_matrix()).unwrap();
        let v = pair(&parallel, &[0, 2], &[1]);
        assert!(!is_isolated(&parallel, &v, GraphSelector::Layer { p: 2, q: 1 }).unwrap());
        assert_eq!(cfe(&parallel, &v, 2, 1).unwrap(), pair(&parallel, &[0], &[1]));
        let u24 = MatroidView::uniform(2, 4).unwrap();
        for (i, j) in [(vec![0, 1], vec![2]), (vec![0, 3], vec![1])] {
            let v = pair(&u24, &i, &j);
            if !is_isolated(&u24, &v, GraphSelector::Layer { p: 2, q: 1 }).unwrap() {
                assert_eq!(cfe(&u24, &v, 2, 1).unwrap(), mcp(&u24, &v));
            }
        }
    }

    #[test]
    fn isolated_vertices_follow_the_closure_characterizations() {
        let u24 = MatroidView::uniform(2, 4).unwrap();
        // Equal sets are isolated in the full graph.
        let diag = pair(&u24, &[0, 1], &[0, 1]);
        assert!(is_isolated(&u24, &diag, GraphSelector::Full).unwrap());
        // Two spanning pairs share their closure, hence are isolated.
        let spanning = pair(&u24, &[0, 1], &[2, 3]);
        assert!(is_isolated(&u24, &spanning, GraphSelector::Full).unwrap());
        // A top layer never has isolated vertices; is_isolated asserts the
        // characterization internally on every call.
        let r = u24.rank();
        for b in u24.bases() {
            for j in u24.independents().into_iter().filter(|s| s.len() == r - 1) {
                let v = pair(&u24, &b, &j);
                assert!(!is_isolated(&u24, &v, GraphSelector::Layer { p: r, q: r - 1 })
                    .unwrap());
            }
        }
    }

    #[test]
    fn classification_on_reference_matroids() {
        let u24 = MatroidView::uniform(2, 4).unwrap();
        let layer = classify_components(&u24, GraphSelector::Layer { p: 2, q: 1 }).unwrap();
        // In this matroid any codependent pair inside a layer vertex has a
        // side of at most one element, so the fixed point is the diagonal
        // on the common support of the two sides.
        for info in &layer.components {
            let common: Vec<usize> = info
                .representative
                .first()
                .iter()
                .copied()
                .filter(|e| info.representative.second().contains(e))
                .collect();
            assert_eq!(info.mcp, pair(&u24, &common, &common));
        }
        let full = classify_components(&u24, GraphSelector::Full).unwrap();
        assert!(full.components.iter().any(|c| c.isolated));

        let single = MatroidView::uniform(1, 1).unwrap();
        let tiny = classify_components(&single, GraphSelector::Full).unwrap();
        // (0,0), the pair {({0},{}),({},{0})}, and ({0},{0}).
        assert_eq!(tiny.vertex_count, 4);
        assert_eq!(tiny.components.len(), 3);
    }

    #[test]
    fn classification_theorems_hold_on_random_matroids() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(107);
        for _ in 0..6 {
            let rows = rng.gen_range(2..4);
            let m = fixtures::random_int_matrix(&mut rng, rows, 6, 2);
            let matroid = MatroidView::linear(&m).unwrap();
            let r = matroid.rank();
            classify_components(&matroid, GraphSelector::Full).unwrap();
            if r >= 1 {
                classify_components(&matroid, GraphSelector::Layer { p: r, q: r - 1 })
                    .unwrap();
                classify_components(&matroid, GraphSelector::Layer { p: 1, q: r - 1 })
                    .unwrap();
            }
        }
        for (r, n) in [(2usize, 5usize), (3, 6)] {
            let m = MatroidView::uniform(r, n).unwrap();
            classify_components(&m, GraphSelector::Full).unwrap();
            classify_components(&m, GraphSelector::Layer { p: r, q: r - 1 }).unwrap();
        }
        for _ in 0..4 {
            let complex = fixtures::random_connected_graph(&mut rng, 5, 7);
            let edges: Vec<(usize, usize)> = complex
                .facets()
                .iter()
                .map(|e| (e[0], e[1]))
                .collect();
            let matroid = MatroidView::graphic(5, &edges).unwrap();
            classify_components(&matroid, GraphSelector::Full).unwrap();
            let r = matroid.rank();
            classify_components(&matroid, GraphSelector::Layer { p: r, q: r - 1 }).unwrap();
        }
    }

    #[test]
    fn closure_witnesses_are_least_elements() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(109);
        for _ in 0..10 {
            let rows = rng.gen_range(2..4);
            let mat = fixtures::random_int_matrix(&mut rng, rows, 5, 2);
            let matroid = MatroidView::linear(&mat).unwrap();
            for u in matroid.independents() {
                for i in matroid.closure(&u).unwrap() {
                    let witness = least_closure_witness(&matroid, &u, i).unwrap();
                    let w_mask = matroid.mask_of(&witness).unwrap();
                    // Least: contained in every subset whose closure has i.
                    let u_mask = matroid.mask_of(&u).unwrap();
                    let mut c = u_mask;
                    loop {
                        if matroid.closure_mask(c) >> i & 1 == 1 {
                            assert_eq!(w_mask & c, w_mask);
                        }
                        if c == 0 {
                            break;
                        }
                        c = (c - 1) & u_mask;
                    }
                }
            }
        }
    }

    #[test]
    fn probe_reports_observations_without_claims() {
        let u24 = MatroidView::uniform(2, 4).unwrap();
        let report = grr_probe(&u24).unwrap();
        assert!(report.vertex_count > 0);
        assert!(report.component_count >= 1);
        let triangle = MatroidView::graphic(3, &[(1, 2), (1, 3), (2, 3)]).unwrap();
        let _ = grr_probe(&triangle).unwrap();
    }
}
