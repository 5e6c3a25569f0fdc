//! Combinatorial surfaces: build an extremal surface from an integer
//! weight vector, model its essential part as a handle diagram, trace
//! boundaries, perform turn surgery and tautening, and bound scl from
//! above by brute force over handle matchings.
//!
//! A handle diagram is the whole story of the surface near its boundary:
//! a successor permutation on letter instances whose cycles spell positive
//! powers of the word, plus a perfect matching pairing mutually inverse
//! letter instances (the 1-handles). Everything else (Euler
//! characteristic, inner boundary, tautness) is derived from those two
//! permutations. Inner boundary components are traced by the transition
//! `p -> pred(M(p))`: a handle pairing positions `i` and `j+1` leads from
//! turn `i` to turn `j`.

use num::{BigInt, BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::circuits::Circuit;
use crate::error::{Error, Result};
use crate::sclcore::{quarter_length, IncidenceTable, IntegerWeights, SclResult, SclValue};
use crate::turngraph::{TurnGraph, TurnIndex};
use crate::word::{in_commutator_subgroup, CyclicWord, Letter};

/// Hard ceiling on letter instances a surface build will materialize.
const MAX_INSTANCES: usize = 4_000_000;

/// One polygonal disk, carrying the turn sequence of the circuit it
/// realizes. Side `t` is labeled by the circuit edge from `circuit[t]` to
/// `circuit[t + 1]`, corners by the turns themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disk {
    pub circuit: Vec<TurnIndex>,
    pub copy: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideRef {
    pub disk: usize,
    pub side: usize,
}

/// A 1-handle joining a disk side labeled `e` to a disk side labeled by
/// the dual edge. Its two free sides are the letter instances at
/// positions `i` and `j+1`, where `e` runs from turn `i` to turn `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rectangle {
    pub transverse: Letter,
    pub from: SideRef,
    pub to: SideRef,
}

#[derive(Clone, Debug)]
pub struct SurfaceDescription {
    word: CyclicWord,
    disks: Vec<Disk>,
    rectangles: Vec<Rectangle>,
    chi: i64,
    n: u64,
    boundary_words: Vec<String>,
}

impl SurfaceDescription {
    pub fn word(&self) -> &CyclicWord {
        &self.word
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    pub fn rectangles(&self) -> &[Rectangle] {
        &self.rectangles
    }

    pub fn chi(&self) -> i64 {
        self.chi
    }

    pub fn degree(&self) -> u64 {
        self.n
    }

    pub fn boundary_words(&self) -> &[String] {
        &self.boundary_words
    }
}

/// Build the taut surface realizing an integer weight vector: one disk
/// per weight unit, sides matched across dual pairs in sorted order.
///
/// Fails if the weights are all zero or if some dual pair has unequal
/// side counts (the weight vector is then infeasible).
pub fn build_surface(
    word: &CyclicWord,
    graph: &TurnGraph,
    circuits: &[Circuit],
    weights: &IntegerWeights,
) -> Result<SurfaceDescription> {
    if circuits.len() != weights.coords().len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} circuits",
            weights.coords().len(),
            circuits.len()
        )));
    }
    if weights.coords().iter().all(|u| u.is_zero()) {
        return Err(Error::InvalidWeights(
            "the zero vector describes no surface".into(),
        ));
    }

    let mut disks: Vec<Disk> = Vec::new();
    let mut sides_by_edge: Vec<Vec<SideRef>> = vec![Vec::new(); graph.edges().len()];
    let mut total_sides = 0usize;
    for (ci, (circuit, weight)) in circuits.iter().zip(weights.coords()).enumerate() {
        let copies: usize = weight.try_into().map_err(|_| {
            Error::SurfaceTooLarge(format!("weight of circuit {} exceeds usize", ci))
        })?;
        total_sides += copies * circuit.len();
        if total_sides > MAX_INSTANCES {
            return Err(Error::SurfaceTooLarge(format!(
                "more than {} disk sides",
                MAX_INSTANCES
            )));
        }
        for copy in 0..copies {
            let disk_id = disks.len();
            for (side, &edge) in circuit.edges().iter().enumerate() {
                sides_by_edge[edge].push(SideRef {
                    disk: disk_id,
                    side,
                });
            }
            disks.push(Disk {
                circuit: circuit.turns().to_vec(),
                copy: copy as u32,
            });
        }
    }

    let mut rectangles: Vec<Rectangle> = Vec::new();
    for e in 0..graph.edges().len() {
        let d = graph.dual_id(e);
        if d < e {
            continue;
        }
        let edge = graph.edge(e);
        let transverse = word.letter(edge.to + 1); // x_{j+1} = x_i^{-1}
        if d == e {
            // Self-dual pair: sides labeled e are matched among themselves.
            let sides = &sides_by_edge[e];
            if !sides.len().is_multiple_of(2) {
                return Err(Error::InvalidWeights(format!(
                    "odd side count on self-dual edge {} -> {}",
                    edge.from, edge.to
                )));
            }
            for pair in sides.chunks(2) {
                rectangles.push(Rectangle {
                    transverse,
                    from: pair[0],
                    to: pair[1],
                });
            }
        } else {
            if sides_by_edge[e].len() != sides_by_edge[d].len() {
                let dual = graph.edge(d);
                return Err(Error::InvalidWeights(format!(
                    "dual pair unbalanced: {} sides on {} -> {} but {} on {} -> {}",
                    sides_by_edge[e].len(),
                    edge.from,
                    edge.to,
                    sides_by_edge[d].len(),
                    dual.from,
                    dual.to
                )));
            }
            for (&a, &b) in sides_by_edge[e].iter().zip(&sides_by_edge[d]) {
                rectangles.push(Rectangle {
                    transverse,
                    from: a,
                    to: b,
                });
            }
        }
    }

    let diagram = diagram_from_parts(word, &disks, &rectangles)?;
    let n = diagram.degree();
    let chi = disks.len() as i64 - rectangles.len() as i64;
    debug_assert_eq!(chi, -((n * word.len() as u64) as i64) / 2 + disks.len() as i64);
    let boundary_words = diagram.outer_words();

    Ok(SurfaceDescription {
        word: word.clone(),
        disks,
        rectangles,
        chi,
        n,
        boundary_words,
    })
}

/// Read off the handle diagram of a surface: its boundary circles and the
/// letter-instance matching induced by the rectangles.
pub fn to_handle_diagram(surface: &SurfaceDescription) -> Result<HandleDiagram> {
    diagram_from_parts(&surface.word, &surface.disks, &surface.rectangles)
}

/// Instances are numbered two per rectangle: `2r` sits at position `i`
/// (along the `from` side) and `2r + 1` at position `j + 1`. The
/// successor map matches instance ends to instance starts across disk
/// corners.
fn diagram_from_parts(
    word: &CyclicWord,
    disks: &[Disk],
    rectangles: &[Rectangle],
) -> Result<HandleDiagram> {
    let l = word.len();
    let count = rectangles.len() * 2;
    if count == 0 {
        return Err(Error::InvalidWeights("surface has no rectangles".into()));
    }

    let corner_base: Vec<usize> = disks
        .iter()
        .scan(0usize, |acc, d| {
            let base = *acc;
            *acc += d.circuit.len();
            Some(base)
        })
        .collect();
    let total_corners: usize = disks.iter().map(|d| d.circuit.len()).sum();
    if total_corners != count {
        return Err(Error::InvalidWeights(format!(
            "{} disk sides but {} rectangle attachments",
            total_corners, count
        )));
    }

    let mut positions = vec![0usize; count];
    let mut start_at = vec![usize::MAX; total_corners];
    let mut end_at = vec![usize::MAX; total_corners];
    let corner = |side: SideRef, offset: usize| -> Result<usize> {
        let disk = disks.get(side.disk).ok_or_else(|| {
            Error::InvalidWeights(format!("rectangle references missing disk {}", side.disk))
        })?;
        let m = disk.circuit.len();
        if side.side >= m {
            return Err(Error::InvalidWeights(format!(
                "side {} out of range on disk {}",
                side.side, side.disk
            )));
        }
        Ok(corner_base[side.disk] + (side.side + offset) % m)
    };

    fn set_once(map: &mut [usize], key: usize, value: usize) -> Result<()> {
        if map[key] != usize::MAX {
            return Err(Error::InvalidWeights(format!(
                "disk corner {} attached twice",
                key
            )));
        }
        map[key] = value;
        Ok(())
    }

    for (r, rect) in rectangles.iter().enumerate() {
        let top = 2 * r;
        let bottom = 2 * r + 1;
        let from_disk = &disks[rect.from.disk];
        let i = from_disk.circuit[rect.from.side];
        let j = from_disk.circuit[(rect.from.side + 1) % from_disk.circuit.len()];
        positions[top] = i;
        positions[bottom] = j % l + 1;

        // Top edge: from corner i-1 of the dual-side disk to corner i of
        // the from-side disk. Bottom edge: from corner j of the from-side
        // disk to corner j+1 of the dual-side disk.
        set_once(&mut start_at, corner(rect.to, 1)?, top)?;
        set_once(&mut end_at, corner(rect.from, 0)?, top)?;
        set_once(&mut start_at, corner(rect.from, 1)?, bottom)?;
        set_once(&mut end_at, corner(rect.to, 0)?, bottom)?;
    }

    let mut succ = vec![usize::MAX; count];
    for c in 0..total_corners {
        if start_at[c] == usize::MAX || end_at[c] == usize::MAX {
            return Err(Error::InvalidWeights(format!(
                "disk corner {} not fully attached",
                c
            )));
        }
        succ[end_at[c]] = start_at[c];
    }

    let mut matching = vec![usize::MAX; count];
    for r in 0..rectangles.len() {
        matching[2 * r] = 2 * r + 1;
        matching[2 * r + 1] = 2 * r;
    }

    HandleDiagram::new(word.clone(), positions, succ, matching)
}

/// The combinatorial model of the essential part of a surface: boundary
/// circles reading positive powers of the word, plus a perfect matching
/// of mutually inverse letter instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleDiagram {
    word: CyclicWord,
    degree: u64,
    positions: Vec<TurnIndex>,
    succ: Vec<usize>,
    pred: Vec<usize>,
    matching: Vec<usize>,
}

impl HandleDiagram {
    /// Validates every structural invariant: the successor map is a
    /// permutation advancing positions by one (so its cycles spell powers
    /// of the word), and the matching is a fixed-point-free involution
    /// pairing mutually inverse letters.
    pub fn new(
        word: CyclicWord,
        positions: Vec<TurnIndex>,
        succ: Vec<usize>,
        matching: Vec<usize>,
    ) -> Result<HandleDiagram> {
        let l = word.len();
        let count = positions.len();
        let fail = |msg: String| Err(Error::InvalidArgument(msg));
        if count == 0 || !count.is_multiple_of(l) {
            return fail(format!("{} instances is not a multiple of |w| = {}", count, l));
        }
        if succ.len() != count || matching.len() != count {
            return fail("positions, successor and matching sizes differ".into());
        }
        let mut seen = vec![false; count];
        for p in 0..count {
            let pos = positions[p];
            if pos < 1 || pos > l {
                return fail(format!("instance {} has position {} out of range", p, pos));
            }
            let s = succ[p];
            if s >= count {
                return fail(format!("successor of {} out of range", p));
            }
            if seen[s] {
                return fail(format!("instance {} has two predecessors", s));
            }
            seen[s] = true;
            if positions[s] != pos % l + 1 {
                return fail(format!(
                    "successor of {} jumps from position {} to {}",
                    p, pos, positions[s]
                ));
            }
            let m = matching[p];
            if m >= count || m == p || matching[m] != p {
                return fail(format!("matching is not a fixed-point-free involution at {}", p));
            }
            if word.letter(positions[m]) != word.letter(pos).inverse() {
                return fail(format!(
                    "matched instances {} and {} do not carry inverse letters",
                    p, m
                ));
            }
        }
        let mut pred = vec![0usize; count];
        for p in 0..count {
            pred[succ[p]] = p;
        }
        Ok(HandleDiagram {
            degree: (count / l) as u64,
            word,
            positions,
            succ,
            pred,
            matching,
        })
    }

    pub fn word(&self) -> &CyclicWord {
        &self.word
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least |w| instances by construction
    }

    pub fn position(&self, instance: usize) -> TurnIndex {
        self.positions[instance]
    }

    pub fn successor(&self, instance: usize) -> usize {
        self.succ[instance]
    }

    pub fn matched(&self, instance: usize) -> usize {
        self.matching[instance]
    }

    /// Cycles of the successor map, each a boundary circle of the
    /// surface, listed by smallest member.
    pub fn outer_cycles(&self) -> Vec<Vec<usize>> {
        permutation_cycles(&self.succ)
    }

    /// Cycles of the inner transition `p -> pred(M(p))`, each an inner
    /// boundary component, listed by smallest member.
    pub fn inner_cycles(&self) -> Vec<Vec<usize>> {
        let transition: Vec<usize> = (0..self.len())
            .map(|p| self.pred[self.matching[p]])
            .collect();
        permutation_cycles(&transition)
    }

    fn outer_words(&self) -> Vec<String> {
        let base = self.word.to_string();
        self.outer_cycles()
            .iter()
            .map(|cycle| base.repeat(cycle.len() / self.word.len()))
            .collect()
    }
}

fn permutation_cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut cycles = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            cycle.push(p);
            p = perm[p];
        }
        cycles.push(cycle);
    }
    cycles
}

/// Lexicographically minimal rotation; turn circuits are cyclic.
fn canonical_rotation(seq: &[TurnIndex]) -> Vec<TurnIndex> {
    let mut best: Option<Vec<TurnIndex>> = None;
    for r in 0..seq.len() {
        let cand: Vec<TurnIndex> = seq[r..].iter().chain(seq[..r].iter()).copied().collect();
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    best.unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryTrace {
    /// Power of the word read by each boundary circle.
    pub outer_powers: Vec<u64>,
    /// Turn circuit of each inner component, canonically rotated.
    pub inner_circuits: Vec<Vec<TurnIndex>>,
}

/// Outer components from the successor map, inner components from the
/// turn transition map.
pub fn trace_boundary(diagram: &HandleDiagram) -> BoundaryTrace {
    let l = diagram.word().len();
    let outer_powers = diagram
        .outer_cycles()
        .iter()
        .map(|c| (c.len() / l) as u64)
        .collect();
    let inner_circuits = diagram
        .inner_cycles()
        .iter()
        .map(|cycle| {
            let turns: Vec<TurnIndex> = cycle.iter().map(|&p| diagram.position(p)).collect();
            canonical_rotation(&turns)
        })
        .collect();
    BoundaryTrace {
        outer_powers,
        inner_circuits,
    }
}

/// `|w|/4 - inner/(2n)` for a diagram, the quantity scl bounds from below.
pub fn diagram_value(diagram: &HandleDiagram) -> BigRational {
    let inner = diagram.inner_cycles().len();
    quarter_length(diagram.word())
        - BigRational::new(
            BigInt::from(inner),
            BigInt::from(2u64) * BigInt::from(diagram.degree()),
        )
}

/// Cut the boundary collar open at two instances of the same turn and
/// re-glue crosswise: the successor map swaps its values at the two
/// instances. Degree and matching are untouched; outer and inner
/// component counts each change by exactly one.
pub fn turn_surgery(
    diagram: &HandleDiagram,
    turn: TurnIndex,
    p1: usize,
    p2: usize,
) -> Result<HandleDiagram> {
    if p1 == p2 || p1 >= diagram.len() || p2 >= diagram.len() {
        return Err(Error::InvalidArgument(format!(
            "surgery needs two distinct instances, got {} and {}",
            p1, p2
        )));
    }
    if diagram.position(p1) != turn || diagram.position(p2) != turn {
        return Err(Error::InvalidArgument(format!(
            "instances {} and {} are not both occurrences of turn {}",
            p1, p2, turn
        )));
    }
    let mut succ = diagram.succ.clone();
    succ.swap(p1, p2);
    HandleDiagram::new(
        diagram.word.clone(),
        diagram.positions.clone(),
        succ,
        diagram.matching.clone(),
    )
}

/// A diagram is taut when every inner component visits each turn at most
/// once, i.e. every turn circuit is embedded.
pub fn is_taut(diagram: &HandleDiagram) -> bool {
    diagram.inner_cycles().iter().all(|cycle| {
        let mut turns: Vec<TurnIndex> = cycle.iter().map(|&p| diagram.position(p)).collect();
        turns.sort_unstable();
        turns.windows(2).all(|w| w[0] != w[1])
    })
}

/// Surger repeated turns until every inner component is embedded. Each
/// surgery splits one inner component, so the count strictly increases
/// and the quantity `|w|/4 - inner/(2n)` never goes up.
pub fn make_taut(diagram: &HandleDiagram) -> HandleDiagram {
    let mut current = diagram.clone();
    loop {
        // Lowest turn first, then the lexicographically first instance
        // pair within a single inner component.
        let mut choice: Option<(TurnIndex, usize, usize)> = None;
        for cycle in current.inner_cycles() {
            let mut per_turn: Vec<(TurnIndex, usize)> = cycle
                .iter()
                .map(|&p| (current.position(p), p))
                .collect();
            per_turn.sort_unstable();
            for pair in per_turn.windows(2) {
                if pair[0].0 == pair[1].0 {
                    let cand = (pair[0].0, pair[0].1, pair[1].1);
                    if choice.is_none_or(|best| cand < best) {
                        choice = Some(cand);
                    }
                    break; // smallest repeated turn of this cycle found
                }
            }
        }
        let (turn, p1, p2) = match choice {
            Some(c) => c,
            None => return current,
        };
        let inner_before = current.inner_cycles().len();
        current = turn_surgery(&current, turn, p1, p2)
            .expect("surgery instances come from a traced component");
        debug_assert_eq!(current.inner_cycles().len(), inner_before + 1);
    }
}

pub const DEFAULT_MATCHING_GUARD: u64 = 10_000_000;

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Refuse to enumerate more matchings than this.
    pub max_matchings: u64,
    /// Skip matchings that are non-canonical under permutations of
    /// identical boundary circles and circle rotations. Off by default;
    /// the plain exhaustive loop is the reference behavior.
    pub reduce_symmetry: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_matchings: DEFAULT_MATCHING_GUARD,
            reduce_symmetry: false,
        }
    }
}

/// Brute-force upper bound for scl: enumerate every way to spread powers
/// of `w` over boundary circles of total degree at most `n_max`, and
/// every perfect inverse-letter matching on the resulting instances;
/// return the minimum of `|w|/4 - inner/(2n)`.
pub fn brute_force_scl_bound(
    word: &CyclicWord,
    n_max: u64,
    options: &OracleOptions,
) -> Result<BigRational> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("degree bound must be at least 1".into()));
    }
    if !in_commutator_subgroup(word) {
        return Err(Error::NotInCommutatorSubgroup(word.to_string()));
    }

    let letter_counts = generator_counts(word);
    let total = count_matchings(&letter_counts, n_max);
    if total > options.max_matchings as u128 {
        return Err(Error::MatchingGuardExceeded {
            needed: total.to_string(),
            guard: options.max_matchings,
        });
    }

    let mut best: Option<BigRational> = None;
    for n in 1..=n_max {
        for partition in partitions(n) {
            let config = BoundaryConfig::new(word, &partition);
            let symmetries = if options.reduce_symmetry {
                config.symmetry_group()
            } else {
                Vec::new()
            };
            config.for_each_matching(&mut |matching| {
                if !symmetries.is_empty() && !is_canonical_matching(matching, &symmetries) {
                    return;
                }
                let inner = count_inner_components(&config.pred, matching);
                let value = quarter_length(word)
                    - BigRational::new(BigInt::from(inner), BigInt::from(2 * n));
                if best.as_ref().is_none_or(|b| value < *b) {
                    best = Some(value);
                }
            });
        }
    }
    best.ok_or_else(|| Error::Internal("no matching found for a balanced word".into()))
}

/// Positive-occurrence count per generator (equal to the negative count
/// for balanced words).
fn generator_counts(word: &CyclicWord) -> Vec<(u32, u64)> {
    let mut counts: Vec<(u32, u64)> = Vec::new();
    for g in 1..=word.rank() {
        let c = word
            .letters()
            .iter()
            .filter(|x| x.generator() == g && !x.is_inverse())
            .count() as u64;
        if c > 0 {
            counts.push((g, c));
        }
    }
    counts
}

fn partitions(n: u64) -> Vec<Vec<u64>> {
    fn go(n: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        let mut part = max.min(n);
        while part >= 1 {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
            part -= 1;
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Total matchings over all degrees up to `n_max`: for each degree,
/// (number of partitions) times the product over generators of
/// (n * count)!. Saturating.
fn count_matchings(counts: &[(u32, u64)], n_max: u64) -> u128 {
    let mut total: u128 = 0;
    for n in 1..=n_max {
        let per_config: u128 = counts
            .iter()
            .map(|&(_, c)| saturating_factorial(n * c))
            .fold(1u128, |acc, f| acc.saturating_mul(f));
        let configs = partitions(n).len() as u128;
        total = total.saturating_add(per_config.saturating_mul(configs));
    }
    total
}

fn saturating_factorial(n: u64) -> u128 {
    let mut f: u128 = 1;
    for i in 2..=n as u128 {
        f = f.saturating_mul(i);
    }
    f
}

/// A fixed boundary configuration: circles reading given powers of the
/// word, with instance positions and predecessor map laid out.
struct BoundaryConfig {
    positions: Vec<TurnIndex>,
    letters: Vec<Letter>,
    pred: Vec<usize>,
    circles: Vec<(usize, u64)>, // (first instance, power)
    len: usize,
}

impl BoundaryConfig {
    fn new(word: &CyclicWord, partition: &[u64]) -> BoundaryConfig {
        let l = word.len();
        let mut positions = Vec::new();
        let mut letters = Vec::new();
        let mut pred = Vec::new();
        let mut circles = Vec::new();
        let mut base = 0usize;
        for &power in partition {
            let size = (power as usize) * l;
            circles.push((base, power));
            for t in 0..size {
                positions.push(t % l + 1);
                letters.push(word.letter(t % l + 1));
                pred.push(if t == 0 { base + size - 1 } else { base + t - 1 });
            }
            base += size;
        }
        BoundaryConfig {
            positions,
            letters,
            pred,
            circles,
            len: l,
        }
    }

    /// Enumerate every perfect inverse-letter matching, fixing for each
    /// generator a bijection from its positive to its negative instances.
    /// Deterministic lexicographic order.
    fn for_each_matching(&self, visit: &mut dyn FnMut(&[usize])) {
        let mut by_generator: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut max_gen = 0;
        for x in &self.letters {
            max_gen = max_gen.max(x.generator());
        }
        for g in 1..=max_gen {
            let pos: Vec<usize> = (0..self.letters.len())
                .filter(|&p| self.letters[p] == Letter::new(g, false))
                .collect();
            let neg: Vec<usize> = (0..self.letters.len())
                .filter(|&p| self.letters[p] == Letter::new(g, true))
                .collect();
            debug_assert_eq!(pos.len(), neg.len());
            if !pos.is_empty() {
                by_generator.push((pos, neg));
            }
        }
        let mut matching = vec![usize::MAX; self.letters.len()];
        assign_generator(&by_generator, 0, &mut matching, visit);
    }

    /// Symmetries of the configuration: swaps of equal-power circles and
    /// rotations of each circle by the word length, closed under
    /// composition. Returns the non-identity elements, or an empty list
    /// when the group is too big to be worth it.
    fn symmetry_group(&self) -> Vec<Vec<usize>> {
        const CLOSURE_CAP: usize = 512;
        let count = self.positions.len();
        let identity: Vec<usize> = (0..count).collect();
        let mut generators: Vec<Vec<usize>> = Vec::new();
        for pair in self.circles.windows(2) {
            let (base_a, power_a) = pair[0];
            let (base_b, power_b) = pair[1];
            if power_a == power_b {
                let size = (power_a as usize) * self.len;
                let mut swap = identity.clone();
                for t in 0..size {
                    swap[base_a + t] = base_b + t;
                    swap[base_b + t] = base_a + t;
                }
                generators.push(swap);
            }
        }
        for &(base, power) in &self.circles {
            if power > 1 {
                let size = (power as usize) * self.len;
                let mut rot = identity.clone();
                for t in 0..size {
                    rot[base + t] = base + (t + self.len) % size;
                }
                generators.push(rot);
            }
        }
        let mut group: Vec<Vec<usize>> = vec![identity.clone()];
        let mut frontier = group.clone();
        while let Some(sigma) = frontier.pop() {
            for gen in &generators {
                let composed: Vec<usize> = (0..count).map(|p| gen[sigma[p]]).collect();
                if !group.contains(&composed) {
                    if group.len() >= CLOSURE_CAP {
                        return Vec::new(); // too big; caller falls back to exhaustive
                    }
                    group.push(composed.clone());
                    frontier.push(composed);
                }
            }
        }
        group.retain(|sigma| *sigma != identity);
        group
    }
}

fn assign_generator(
    by_generator: &[(Vec<usize>, Vec<usize>)],
    g: usize,
    matching: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if g == by_generator.len() {
        visit(matching);
        return;
    }
    let (pos, neg) = &by_generator[g];
    let mut used = vec![false; neg.len()];
    assign_one(pos, neg, 0, &mut used, matching, &mut |m| {
        assign_generator(by_generator, g + 1, m, visit)
    });
}

fn assign_one(
    pos: &[usize],
    neg: &[usize],
    idx: usize,
    used: &mut Vec<bool>,
    matching: &mut Vec<usize>,
    next: &mut dyn FnMut(&mut Vec<usize>),
) {
    if idx == pos.len() {
        next(matching);
        return;
    }
    for t in 0..neg.len() {
        if used[t] {
            continue;
        }
        used[t] = true;
        matching[pos[idx]] = neg[t];
        matching[neg[t]] = pos[idx];
        assign_one(pos, neg, idx + 1, used, matching, next);
        matching[neg[t]] = usize::MAX;
        matching[pos[idx]] = usize::MAX;
        used[t] = false;
    }
}

/// Smallest conjugate wins; equal-value orbits are evaluated once.
fn is_canonical_matching(matching: &[usize], symmetries: &[Vec<usize>]) -> bool {
    for sigma in symmetries {
        // conjugate[p] = sigma(M(sigma^{-1}(p))); build via forward map.
        let mut conjugate = vec![usize::MAX; matching.len()];
        for p in 0..matching.len() {
            conjugate[sigma[p]] = sigma[matching[p]];
        }
        if conjugate.as_slice() < matching {
            return false;
        }
    }
    true
}

fn count_inner_components(pred: &[usize], matching: &[usize]) -> usize {
    let mut seen = vec![false; pred.len()];
    let mut components = 0;
    for start in 0..pred.len() {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            p = pred[matching[p]];
        }
    }
    components
}

/// Re-derive the certificate surface of a finite result and check every
/// identity it is supposed to satisfy.
pub fn verify_certificate(result: &SclResult) -> Result<()> {
    let scl = match &result.scl {
        SclValue::Finite(v) => v,
        SclValue::Infinite => {
            return Err(Error::InvalidArgument(
                "an infinite result carries no surface certificate".into(),
            ))
        }
    };
    let fail = |msg: String| Err(Error::Internal(format!("verification failed: {}", msg)));

    let word = &result.word;
    let graph = crate::turngraph::build_turn_graph(word);
    let surface = build_surface(word, &graph, &result.circuits, &result.integer_weights)?;
    let l = word.len() as i64;
    let n = surface.degree();

    if n != result.n {
        return fail(format!("surface degree {} != reported n {}", n, result.n));
    }
    let disks = surface.disks().len() as i64;
    if surface.chi() != -(n as i64) * l / 2 + disks {
        return fail(format!(
            "chi {} != -n|w|/2 + disks = {}",
            surface.chi(),
            -(n as i64) * l / 2 + disks
        ));
    }

    let diagram = to_handle_diagram(&surface)?;
    let trace = trace_boundary(&diagram);
    if trace.outer_powers.contains(&0) {
        return fail("boundary circle of power zero".into());
    }
    if trace.outer_powers.iter().sum::<u64>() != n {
        return fail("boundary powers do not sum to the degree".into());
    }
    for (word_read, power) in surface.boundary_words().iter().zip(&trace.outer_powers) {
        if *word_read != word.to_string().repeat(*power as usize) {
            return fail(format!("boundary word {} is not a power of {}", word_read, word));
        }
    }
    if trace.inner_circuits.len() as i64 != disks {
        return fail("inner component count differs from disk count".into());
    }
    if !is_taut(&diagram) {
        return fail("certificate surface is not taut".into());
    }

    // Traced multiplicities must reproduce the weight vector.
    let mut expected: Vec<(Vec<TurnIndex>, BigInt)> = result
        .circuits_used()
        .into_iter()
        .map(|(c, u)| (c.turns().to_vec(), u.clone()))
        .collect();
    for circuit in &trace.inner_circuits {
        match expected.iter_mut().find(|(turns, _)| turns == circuit) {
            Some((_, count)) if count.is_positive() => *count -= 1,
            _ => return fail(format!("unexpected traced circuit {:?}", circuit)),
        }
    }
    if expected.iter().any(|(_, count)| !count.is_zero()) {
        return fail("traced circuit multiplicities do not match the weights".into());
    }

    // Handle counts per dual pair match the edge loads on both sides.
    let table = IncidenceTable::build(&graph, &result.circuits);
    let rationals = result.integer_weights.to_rationals();
    let mut per_pair = vec![0u64; graph.edges().len()];
    for rect in surface.rectangles() {
        let disk = &surface.disks()[rect.from.disk];
        let from = disk.circuit[rect.from.side];
        let to = disk.circuit[(rect.from.side + 1) % disk.circuit.len()];
        let e = graph
            .edge_id(from, to)
            .ok_or_else(|| Error::Internal("rectangle side is not an edge".into()))?;
        per_pair[e.min(graph.dual_id(e))] += 1;
    }
    for (e, &count) in per_pair.iter().enumerate() {
        let d = graph.dual_id(e);
        if d < e {
            continue;
        }
        let load = table.edge_load(&rationals, e);
        if load != table.edge_load(&rationals, d) {
            return fail("edge loads differ across a dual pair".into());
        }
        if load != BigRational::from_integer(BigInt::from(count)) {
            return fail("rectangle count differs from the edge load".into());
        }
    }

    let accounted = quarter_length(word)
        - BigRational::new(BigInt::from(disks), BigInt::from(2u64) * BigInt::from(n));
    if &accounted != scl {
        return fail(format!("certificate identity: {} != {}", accounted, scl));
    }
    Ok(())
}

// --- stable JSON schema ------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SurfaceJson {
    pub schema: u32,
    pub disks: Vec<DiskJson>,
    pub rectangles: Vec<RectangleJson>,
    pub chi: i64,
    pub n: u64,
    pub boundary: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DiskJson {
    pub circuit: Vec<TurnIndex>,
    pub copy: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RectangleJson {
    pub letter: String,
    pub from: SideRef,
    pub to: SideRef,
}

impl SurfaceDescription {
    pub fn to_json_struct(&self) -> SurfaceJson {
        SurfaceJson {
            schema: 1,
            disks: self
                .disks
                .iter()
                .map(|d| DiskJson {
                    circuit: d.circuit.clone(),
                    copy: d.copy,
                })
                .collect(),
            rectangles: self
                .rectangles
                .iter()
                .map(|r| RectangleJson {
                    letter: r.transverse.to_string(),
                    from: r.from,
                    to: r.to,
                })
                .collect(),
            chi: self.chi,
            n: self.n,
            boundary: self.boundary_words.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(&self.to_json_struct())
            .map_err(|e| Error::Internal(format!("surface serialization failed: {}", e)))
    }
}
