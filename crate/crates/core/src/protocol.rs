//! Swap protocols: sets of disjoint level transpositions (or general
//! permutations) acting on the diagonal of the composite state.

use std::fmt::{self, Write as _};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::state::{decode_index, flat_index, level_cold_energy, level_hot_energy, CompositeState};

/// Largest level count enumerated in transposition mode without an override.
pub const TRANSPOSITION_LEVEL_CAP: usize = 16;
/// Largest level count enumerated in permutation mode without an override.
pub const PERMUTATION_LEVEL_CAP: usize = 8;

/// Exchange of two levels, stored with the smaller flat index first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transposition {
    a: usize,
    b: usize,
}

impl Transposition {
    pub fn new(a: usize, b: usize) -> Self {
        Self {
            a: a.min(b),
            b: a.max(b),
        }
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// Internal swaps keep the catalyst level; external swaps change it.
    pub fn is_external(&self, d: usize) -> bool {
        self.a % d != self.b % d
    }

    /// `(up, down)`: the level with larger total energy is "up"; ties are broken
    /// by the hot energy and then by the smaller index.
    pub fn orient(&self, d: usize, omega_h: f64, omega_c: f64) -> (usize, usize) {
        let key = |l: usize| {
            let h = level_hot_energy(l, d, omega_h);
            (h + level_cold_energy(l, d, omega_c), h)
        };
        let (ea, eb) = (key(self.a), key(self.b));
        if ea.0 > eb.0 || (ea.0 == eb.0 && ea.1 >= eb.1) {
            (self.a, self.b)
        } else {
            (self.b, self.a)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProtocolKind {
    /// Disjoint transpositions, sorted by their smaller index.
    Transpositions(Vec<Transposition>),
    /// Level `ℓ` is sent to `image[ℓ]`.
    Permutation(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtocolMode {
    Transpositions,
    Permutations,
}

/// A work stroke on `hot ⊗ cold ⊗ catalyst` with catalyst dimension `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SwapProtocol {
    d: usize,
    kind: ProtocolKind,
}

impl SwapProtocol {
    /// The identity protocol (no swaps).
    pub fn identity(d: usize) -> Self {
        Self {
            d,
            kind: ProtocolKind::Transpositions(Vec::new()),
        }
    }

    /// Canonicalizes without validating; use [`validate_protocol`] for diagnostics.
    pub fn from_pairs_unchecked(d: usize, pairs: &[(usize, usize)]) -> Self {
        let mut swaps: Vec<_> = pairs.iter().map(|&(a, b)| Transposition::new(a, b)).collect();
        swaps.sort();
        Self {
            d,
            kind: ProtocolKind::Transpositions(swaps),
        }
    }

    pub fn from_pairs(d: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::from_pairs_unchecked(d, pairs).validated()
    }

    pub fn from_image(d: usize, image: Vec<usize>) -> Result<Self> {
        Self {
            d,
            kind: ProtocolKind::Permutation(image),
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        let report = validate_protocol(&self);
        if report.is_ok() {
            Ok(self)
        } else {
            Err(Error::InvalidProtocol(report.violations))
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn levels(&self) -> usize {
        4 * self.d
    }

    pub fn kind(&self) -> &ProtocolKind {
        &self.kind
    }

    pub fn swaps(&self) -> Option<&[Transposition]> {
        match &self.kind {
            ProtocolKind::Transpositions(s) => Some(s),
            ProtocolKind::Permutation(_) => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        match &self.kind {
            ProtocolKind::Transpositions(s) => s.is_empty(),
            ProtocolKind::Permutation(p) => p.iter().enumerate().all(|(i, &v)| i == v),
        }
    }

    /// Image array of the protocol (assumes a valid protocol).
    pub fn image(&self) -> Vec<usize> {
        match &self.kind {
            ProtocolKind::Transpositions(swaps) => {
                let mut image: Vec<usize> = (0..self.levels()).collect();
                for t in swaps {
                    image.swap(t.a, t.b);
                }
                image
            }
            ProtocolKind::Permutation(p) => p.clone(),
        }
    }

    /// Number of swaps that change the catalyst level (`None` for permutations).
    pub fn external_count(&self) -> Option<usize> {
        self.swaps().map(|s| s.iter().filter(|t| t.is_external(self.d)).count())
    }

    pub fn internal_count(&self) -> Option<usize> {
        self.swaps()
            .map(|s| s.iter().filter(|t| !t.is_external(self.d)).count())
    }

    /// Text form: one `i j k i' j' k'` line per swap, or a single `perm:` line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.kind {
            ProtocolKind::Transpositions(swaps) => {
                for t in swaps {
                    let (x, y) = (decode_index(t.a, self.d), decode_index(t.b, self.d));
                    let _ = writeln!(out, "{} {} {} {} {} {}", x.hot, x.cold, x.cat, y.hot, y.cold, y.cat);
                }
            }
            ProtocolKind::Permutation(p) => {
                let _ = writeln!(out, "perm: {}", p.iter().join(" "));
            }
        }
        out
    }

    /// Parses the text form for catalyst dimension `d`.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(domain("catalyst dimension must be at least 1"));
        }
        let mut pairs = Vec::new();
        let mut image: Option<Vec<usize>> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = n + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("perm:") {
                if image.is_some() || !pairs.is_empty() {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "a permutation line must be the only protocol line".into(),
                    });
                }
                let img = rest
                    .split_whitespace()
                    .map(|t| t.parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::Parse {
                        line: lineno,
                        msg: e.to_string(),
                    })?;
                image = Some(img);
                continue;
            }
            if image.is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "transpositions cannot follow a permutation line".into(),
                });
            }
            let nums = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: lineno,
                    msg: e.to_string(),
                })?;
            if nums.len() != 6 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected 6 integers `i j k i' j' k'`, found {}", nums.len()),
                });
            }
            let level = |i: usize, j: usize, k: usize| -> Result<usize> {
                if i > 1 || j > 1 || k >= d {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("level |{i}{j}{k}⟩ out of range for d={d}"),
                    });
                }
                Ok(flat_index(i as u8, j as u8, k, d))
            };
            pairs.push((level(nums[0], nums[1], nums[2])?, level(nums[3], nums[4], nums[5])?));
        }
        match image {
            Some(img) => Self::from_image(d, img),
            None => Self::from_pairs(d, &pairs),
        }
    }
}

impl fmt::Display for SwapProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ProtocolKind::Transpositions(swaps) if swaps.is_empty() => write!(f, "identity"),
            ProtocolKind::Transpositions(swaps) => {
                let d = self.d;
                let label = |l: usize| {
                    let x = decode_index(l, d);
                    format!("|{}{}{}⟩", x.hot, x.cold, x.cat)
                };
                write!(
                    f,
                    "{}",
                    swaps
                        .iter()
                        .map(|t| format!("{}↔{}", label(t.a), label(t.b)))
                        .join(", ")
                )
            }
            ProtocolKind::Permutation(p) => write!(f, "perm[{}]", p.iter().join(" ")),
        }
    }
}

/// Outcome of [`validate_protocol`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub violations: Vec<String>,
    pub internal: usize,
    pub external: usize,
}

impl ProtocolReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every problem with a protocol and classifies its swaps.
pub fn validate_protocol(proto: &SwapProtocol) -> ProtocolReport {
    let mut report = ProtocolReport::default();
    let d = proto.d;
    if d == 0 {
        report.violations.push("catalyst dimension must be at least 1".into());
        return report;
    }
    let n = 4 * d;
    match &proto.kind {
        ProtocolKind::Transpositions(swaps) => {
            let mut seen = vec![false; n];
            for t in swaps {
                if t.a == t.b {
                    report
                        .violations
                        .push(format!("swap ({}, {}) exchanges a level with itself", t.a, t.b));
                }
                for idx in [t.a, t.b] {
                    if idx >= n {
                        report.violations.push(format!("index {idx} out of range [0, {n})"));
                    } else if seen[idx] && !(t.a == t.b && idx == t.b) {
                        report.violations.push(format!("index {idx} repeated"));
                    } else {
                        seen[idx] = true;
                    }
                }
                if t.a < n && t.b < n && t.a != t.b {
                    if t.is_external(d) {
                        report.external += 1;
                    } else {
                        report.internal += 1;
                    }
                }
            }
        }
        ProtocolKind::Permutation(image) => {
            if image.len() != n {
                report
                    .violations
                    .push(format!("permutation has {} entries, expected {n}", image.len()));
            }
            let mut hit = vec![false; n];
            for &v in image {
                if v >= n {
                    report.violations.push(format!("image {v} out of range [0, {n})"));
                } else if hit[v] {
                    report.violations.push(format!("image {v} repeated (not a bijection)"));
                } else {
                    hit[v] = true;
                }
            }
        }
    }
    report
}

/// Permutes the diagonal of `state`: the population of level `ℓ` moves to `image[ℓ]`.
pub fn apply_protocol(state: &CompositeState, proto: &SwapProtocol) -> Result<CompositeState> {
    if state.dim() != proto.d {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            got: proto.d,
        });
    }
    let report = validate_protocol(proto);
    if !report.is_ok() {
        return Err(Error::InvalidProtocol(report.violations));
    }
    Ok(apply_unchecked(state, proto))
}

pub(crate) fn apply_unchecked(state: &CompositeState, proto: &SwapProtocol) -> CompositeState {
    let mut probs = state.probs().to_vec();
    match &proto.kind {
        ProtocolKind::Transpositions(swaps) => {
            for t in swaps {
                probs.swap(t.a, t.b);
            }
        }
        ProtocolKind::Permutation(image) => {
            for (from, &to) in image.iter().enumerate() {
                probs[to] = state.probs()[from];
            }
        }
    }
    CompositeState::from_parts(state.dim(), probs, state.omega_h(), state.omega_c())
}

/// The catalytic protocol with `d` external swaps, each de-exciting the hot qubit
/// and exactly one of them exciting the cold qubit:
///
/// * `|10k⟩ ↔ |00,k−1⟩` for `k = 1 … d−1`
/// * `|100⟩ ↔ |01,d−1⟩`
///
/// A positive flow `δp` through each swap carries probability from catalyst
/// column `k` to `k−1` and from column `0` back to `d−1`, so cyclicity forces
/// the same `δp` on every swap. For `d = 1` this is the Otto swap `|10⟩ ↔ |01⟩`.
pub fn d_otto_protocol(d: usize) -> Result<SwapProtocol> {
    if d == 0 {
        return Err(domain("catalyst dimension must be at least 1"));
    }
    let mut pairs: Vec<(usize, usize)> = (1..d)
        .map(|k| (flat_index(1, 0, k, d), flat_index(0, 0, k - 1, d)))
        .collect();
    pairs.push((flat_index(1, 0, 0, d), flat_index(0, 1, d - 1, d)));
    SwapProtocol::from_pairs(d, &pairs)
}

/// All partial matchings (including the empty one) on a sorted set of levels,
/// yielded in canonical order.
#[derive(Debug, Clone)]
struct Matchings {
    elems: Vec<usize>,
    decided: Vec<bool>,
    /// `(position, option, partner position)`; option 0 leaves the element single.
    frames: Vec<(usize, usize, Option<usize>)>,
    started: bool,
    done: bool,
}

impl Matchings {
    fn new(elems: Vec<usize>) -> Self {
        let m = elems.len();
        Self {
            elems,
            decided: vec![false; m],
            frames: Vec::with_capacity(m),
            started: false,
            done: false,
        }
    }

    fn descend(&mut self, from: usize) {
        for q in from..self.elems.len() {
            if !self.decided[q] {
                self.decided[q] = true;
                self.frames.push((q, 0, None));
            }
        }
    }

    fn current(&self) -> Vec<Transposition> {
        self.frames
            .iter()
            .filter_map(|&(q, _, r)| r.map(|r| Transposition::new(self.elems[q], self.elems[r])))
            .collect()
    }

    fn advance(&mut self) -> bool {
        while let Some((q, opt, partner)) = self.frames.pop() {
            if let Some(r) = partner {
                self.decided[r] = false;
            }
            let next = (q + 1..self.elems.len()).filter(|&r| !self.decided[r]).nth(opt);
            if let Some(r) = next {
                self.decided[r] = true;
                self.frames.push((q, opt + 1, Some(r)));
                self.descend(q + 1);
                return true;
            }
            self.decided[q] = false;
        }
        false
    }
}

impl Iterator for Matchings {
    type Item = Vec<Transposition>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.descend(0);
            return Some(self.current());
        }
        if self.advance() {
            Some(self.current())
        } else {
            self.done = true;
            None
        }
    }
}

/// One slice of the protocol space, for partitioned (parallel) consumption.
///
/// Transposition partitions are keyed by the first swap `(a, b)`; permutation
/// partitions by the image of level 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partition {
    FirstSwap { d: usize, a: usize, b: usize },
    ImageOfZero { d: usize, image: usize },
}

impl Partition {
    pub fn protocols(&self) -> Box<dyn Iterator<Item = SwapProtocol> + Send> {
        match *self {
            Partition::FirstSwap { d, a, b } => {
                let rest: Vec<usize> = (a + 1..4 * d).filter(|&l| l != b).collect();
                let head = Transposition::new(a, b);
                Box::new(Matchings::new(rest).map(move |tail| {
                    let mut swaps = Vec::with_capacity(tail.len() + 1);
                    swaps.push(head);
                    swaps.extend(tail);
                    SwapProtocol {
                        d,
                        kind: ProtocolKind::Transpositions(swaps),
                    }
                }))
            }
            Partition::ImageOfZero { d, image } => {
                let n = 4 * d;
                let rest: Vec<usize> = (0..n).filter(|&l| l != image).collect();
                Box::new(rest.into_iter().permutations(n - 1).filter_map(move |tail| {
                    let mut img = Vec::with_capacity(n);
                    img.push(image);
                    img.extend(tail);
                    let proto = SwapProtocol {
                        d,
                        kind: ProtocolKind::Permutation(img),
                    };
                    (!proto.is_identity()).then_some(proto)
                }))
            }
        }
    }
}

fn check_cap(d: usize, mode: ProtocolMode, allow_large: bool) -> Result<()> {
    if d == 0 {
        return Err(domain("catalyst dimension must be at least 1"));
    }
    let (cap, what) = match mode {
        ProtocolMode::Transpositions => (TRANSPOSITION_LEVEL_CAP, "transposition enumeration"),
        ProtocolMode::Permutations => (PERMUTATION_LEVEL_CAP, "permutation enumeration"),
    };
    if 4 * d > cap && !allow_large {
        return Err(Error::CapExceeded {
            what,
            levels: 4 * d,
            cap,
        });
    }
    Ok(())
}

/// Partitions covering every non-identity protocol exactly once.
pub fn protocol_partitions(d: usize, mode: ProtocolMode, allow_large: bool) -> Result<Vec<Partition>> {
    check_cap(d, mode, allow_large)?;
    let n = 4 * d;
    Ok(match mode {
        ProtocolMode::Transpositions => (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| Partition::FirstSwap { d, a, b }))
            .collect(),
        ProtocolMode::Permutations => (0..n).map(|image| Partition::ImageOfZero { d, image }).collect(),
    })
}

/// Streams every non-identity protocol in canonical form: all non-empty partial
/// matchings on `4d` levels, or all non-identity permutations.
pub fn enumerate_protocols(
    d: usize,
    mode: ProtocolMode,
    allow_large: bool,
) -> Result<impl Iterator<Item = SwapProtocol>> {
    let parts = protocol_partitions(d, mode, allow_large)?;
    Ok(parts.into_iter().flat_map(|p| p.protocols()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{composite_initial, thermal_qubit, Catalyst};

    fn involutions(n: u64) -> u64 {
        let (mut prev, mut cur) = (1u64, 1u64);
        for k in 2..=n {
            let next = cur + (k - 1) * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn d_otto_has_only_external_swaps() {
        for d in 1..=6 {
            let p = d_otto_protocol(d).unwrap();
            let r = validate_protocol(&p);
            assert!(r.is_ok());
            assert_eq!(r.external + r.internal, d);
            if d > 1 {
                assert_eq!((r.internal, r.external), (0, d));
            }
        }
        // Built by hand from the |10k⟩ / |00,k−1⟩ / |01,d−1⟩ wiring, d = 3.
        let p = d_otto_protocol(3).unwrap();
        assert_eq!(
            p.swaps().unwrap(),
            &[
                Transposition::new(0, 7),
                Transposition::new(1, 8),
                Transposition::new(5, 6)
            ]
        );
    }

    #[test]
    fn d_otto_d1_is_the_otto_swap() {
        let p = d_otto_protocol(1).unwrap();
        assert_eq!(p.swaps().unwrap(), &[Transposition::new(1, 2)]);
        assert!(d_otto_protocol(0).is_err());
    }

    #[test]
    fn d_otto_d2_matches_reference_wiring() {
        // |10,0⟩↔|01,1⟩ and |00,0⟩↔|10,1⟩ in 0-based catalyst labels.
        let p = d_otto_protocol(2).unwrap();
        let expect = SwapProtocol::from_pairs(
            2,
            &[
                (flat_index(1, 0, 0, 2), flat_index(0, 1, 1, 2)),
                (flat_index(0, 0, 0, 2), flat_index(1, 0, 1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn repeated_index_is_reported() {
        let p = SwapProtocol::from_pairs_unchecked(1, &[(0, 1), (1, 2)]);
        let r = validate_protocol(&p);
        assert_eq!(r.violations, vec!["index 1 repeated".to_string()]);
        assert!(SwapProtocol::from_pairs(1, &[(0, 1), (1, 2)]).is_err());
    }

    #[test]
    fn other_violations_are_reported() {
        let r = validate_protocol(&SwapProtocol::from_pairs_unchecked(1, &[(0, 4), (2, 2)]));
        assert_eq!(r.violations.len(), 2, "{:?}", r.violations);
        let r = validate_protocol(&SwapProtocol {
            d: 1,
            kind: ProtocolKind::Permutation(vec![0, 0, 1, 2]),
        });
        assert!(!r.is_ok());
        let r = validate_protocol(&SwapProtocol {
            d: 1,
            kind: ProtocolKind::Permutation(vec![0, 1, 2]),
        });
        assert!(!r.is_ok());
    }

    #[test]
    fn empty_protocol_is_valid_identity() {
        let p = SwapProtocol::identity(3);
        assert!(validate_protocol(&p).is_ok());
        let h = thermal_qubit(0.4, 1.0).unwrap();
        let c = thermal_qubit(2.0, 0.3).unwrap();
        let s = composite_initial(&h, &c, &Catalyst::new(vec![0.2, 0.3, 0.5]).unwrap());
        assert_eq!(apply_protocol(&s, &p).unwrap(), s);
    }

    #[test]
    fn otto_swap_exchanges_entries_one_and_two() {
        let h = thermal_qubit(0.3, 1.0).unwrap();
        let c = thermal_qubit(3.0, 0.5).unwrap();
        let s = composite_initial(&h, &c, &Catalyst::uniform(1).unwrap());
        let out = apply_protocol(&s, &d_otto_protocol(1).unwrap()).unwrap();
        let (p, q) = (s.probs(), out.probs());
        assert_eq!((q[0], q[1], q[2], q[3]), (p[0], p[2], p[1], p[3]));
    }

    #[test]
    fn apply_rejects_mismatched_dimension() {
        let s = CompositeState::from_probs(1, vec![0.25; 4], 1.0, 1.0).unwrap();
        assert!(apply_protocol(&s, &d_otto_protocol(2).unwrap()).is_err());
    }

    #[test]
    fn orientation_rules() {
        // |10⟩ (ω_h) vs |01⟩ (ω_c), d = 1.
        let t = Transposition::new(1, 2);
        assert_eq!(t.orient(1, 1.0, 0.5), (2, 1));
        assert_eq!(t.orient(1, 1.0, 1.5), (1, 2));
        // Equal total energy: hot energy decides.
        assert_eq!(t.orient(1, 1.0, 1.0), (2, 1));
        // Full tie (same block, different catalyst level): smaller index is up.
        assert_eq!(Transposition::new(0, 1).orient(2, 1.0, 1.0), (0, 1));
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(
            enumerate_protocols(1, ProtocolMode::Permutations, false)
                .unwrap()
                .count(),
            23
        );
        assert_eq!(
            enumerate_protocols(2, ProtocolMode::Permutations, false)
                .unwrap()
                .count(),
            40_319
        );
        assert!(enumerate_protocols(3, ProtocolMode::Permutations, false).is_err());
    }

    #[test]
    fn matching_counts_follow_involution_recurrence() {
        assert_eq!(
            enumerate_protocols(1, ProtocolMode::Transpositions, false)
                .unwrap()
                .count(),
            9
        );
        assert_eq!(involutions(8) - 1, 763);
        assert_eq!(
            enumerate_protocols(2, ProtocolMode::Transpositions, false)
                .unwrap()
                .count() as u64,
            involutions(8) - 1
        );
        assert_eq!(
            enumerate_protocols(3, ProtocolMode::Transpositions, false)
                .unwrap()
                .count() as u64,
            involutions(12) - 1
        );
        for m in 0..9 {
            assert_eq!(Matchings::new((0..m).collect()).count() as u64, involutions(m as u64));
        }
        assert!(enumerate_protocols(5, ProtocolMode::Transpositions, false).is_err());
    }

    #[test]
    fn text_round_trip() {
        let p = d_otto_protocol(3).unwrap();
        let text = format!("# d-Otto, d = 3\n\n{}", p.to_text());
        assert_eq!(SwapProtocol::parse(&text, 3).unwrap(), p);
        let perm = SwapProtocol::from_image(1, vec![1, 2, 0, 3]).unwrap();
        assert_eq!(SwapProtocol::parse(&perm.to_text(), 1).unwrap(), perm);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            SwapProtocol::parse("1 0 0 0 1", 1),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(SwapProtocol::parse("1 0 2 0 1 0", 2).is_err());
        assert!(SwapProtocol::parse("1 0 0 0 1 0\n1 0 0 0 0 0", 1).is_err());
        assert!(SwapProtocol::parse("x 0 0 0 1 0", 1).is_err());
        assert!(SwapProtocol::parse("perm: 0 1 2", 1).is_err());
        assert_eq!(
            SwapProtocol::parse("# nothing\n", 2).unwrap(),
            SwapProtocol::identity(2)
        );
    }
}
