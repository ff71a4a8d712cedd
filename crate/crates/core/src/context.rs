//! Complete sets of commuting full-weight Pauli observables ("contexts").
//!
//! For even `n` every word `g` generates two contexts of size `2^(n-1) + 1`:
//! `g` itself plus the words that differ from `g` at every position, split by
//! the parity of one of the two remaining letters. At `n = 4` a second family
//! exists, built as tensor products of two-qubit contexts over the three ways
//! of pairing the qubits.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::pauli::{commutes, GeneralPauli, PauliWord, Symplectic};

/// Largest `n` for which [`all_contexts`] will materialize the catalog.
pub const MAX_CATALOG_QUBITS: usize = 8;

/// Largest `n` accepted by the clique oracle.
pub const MAX_CLIQUE_QUBITS: usize = 4;

/// Which half of the words opposite the generator a context keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Half {
    Even,
    Odd,
}

impl Half {
    pub fn from_parity(odd: bool) -> Half {
        if odd {
            Half::Odd
        } else {
            Half::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Half::Odd
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Half::Even => "even",
            Half::Odd => "odd",
        })
    }
}

/// The three ways to split four qubits into two pairs.
pub const PAIRINGS_N4: [[[usize; 2]; 2]; 3] = [
    [[0, 1], [2, 3]],
    [[0, 2], [1, 3]],
    [[0, 3], [1, 2]],
];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ContextOrigin {
    /// Built from a generator word and a half selection.
    Generated { generator: PauliWord, half: Half },
    /// `n = 4` tensor product of two-qubit contexts `left` and `right`
    /// (indices into `all_contexts(2)`) placed on the pairs of `pairing`.
    Bipartite {
        pairing: usize,
        left: usize,
        right: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    origin: ContextOrigin,
    members: Vec<PauliWord>,
}

impl Context {
    pub fn origin(&self) -> &ContextOrigin {
        &self.origin
    }

    /// Members in alphabetical order.
    pub fn members(&self) -> &[PauliWord] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn qubits(&self) -> usize {
        self.members[0].len()
    }

    pub fn generator(&self) -> Option<PauliWord> {
        match self.origin {
            ContextOrigin::Generated { generator, .. } => Some(generator),
            ContextOrigin::Bipartite { .. } => None,
        }
    }

    pub fn half(&self) -> Option<Half> {
        match self.origin {
            ContextOrigin::Generated { half, .. } => Some(half),
            ContextOrigin::Bipartite { .. } => None,
        }
    }

    pub fn contains(&self, word: &PauliWord) -> bool {
        self.members.binary_search(word).is_ok()
    }

    pub fn member_set(&self) -> BTreeSet<PauliWord> {
        self.members.iter().copied().collect()
    }

    /// True when every pair of members commutes.
    pub fn is_commuting(&self) -> bool {
        self.members.iter().enumerate().all(|(i, a)| {
            self.members[i + 1..]
                .iter()
                .all(|b| a.commutes_bits(b))
        })
    }

    /// Members that differ from every other member at all positions.
    pub fn letter_disjoint_members(&self) -> Vec<PauliWord> {
        self.members
            .iter()
            .filter(|a| {
                self.members
                    .iter()
                    .filter(|b| b != a)
                    .all(|b| a.shares_no_letter(b))
            })
            .copied()
            .collect()
    }

    pub fn to_record(&self) -> ContextRecord {
        let (generator, half, origin) = match &self.origin {
            ContextOrigin::Generated { generator, half } => {
                (Some(*generator), Some(*half), ContextKind::Lemma1)
            }
            ContextOrigin::Bipartite { .. } => (None, None, ContextKind::BipartiteN4),
        };
        ContextRecord {
            generator,
            half,
            origin,
            members: self.members.clone(),
        }
    }
}

fn check_even(n: usize) -> Result<()> {
    if n == 0 {
        return Err(usage("qubit count must be positive"));
    }
    if n % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "contexts are only constructed for even n (got {n})"
        )));
    }
    Ok(())
}

/// The context generated by `generator` keeping `half`.
///
/// At each position the two letters other than the generator's are taken in
/// cyclic order after it (`Z -> X, Y`; `X -> Y, Z`; `Y -> Z, X`) and the
/// half counts occurrences of the first of the two.
pub fn generated_context(generator: PauliWord, half: Half) -> Result<Context> {
    let n = generator.len();
    check_even(n)?;
    let first: Vec<_> = generator.letters().iter().map(|l| l.cycle()).collect();
    let second: Vec<_> = first.iter().map(|l| l.cycle()).collect();
    let mut members = Vec::with_capacity((1 << (n - 1)) + 1);
    members.push(generator);
    for pick in 0u64..(1u64 << n) {
        if (pick.count_ones() % 2 == 1) != half.is_odd() {
            continue;
        }
        let letters: Vec<_> = (0..n)
            .map(|q| if pick >> q & 1 == 1 { first[q] } else { second[q] })
            .collect();
        members.push(PauliWord::new(&letters)?);
    }
    members.sort();
    Ok(Context {
        origin: ContextOrigin::Generated { generator, half },
        members,
    })
}

fn bipartite_contexts_n4() -> Result<Vec<Context>> {
    let pairs = all_contexts(2)?;
    let mut out = Vec::with_capacity(3 * pairs.len() * pairs.len());
    for (p, pairing) in PAIRINGS_N4.iter().enumerate() {
        for (li, left) in pairs.iter().enumerate() {
            for (ri, right) in pairs.iter().enumerate() {
                let mut members = Vec::with_capacity(9);
                for a in left.members() {
                    for b in right.members() {
                        let mut letters = [a.letter(0); 4];
                        letters[pairing[0][0]] = a.letter(0);
                        letters[pairing[0][1]] = a.letter(1);
                        letters[pairing[1][0]] = b.letter(0);
                        letters[pairing[1][1]] = b.letter(1);
                        members.push(PauliWord::new(&letters)?);
                    }
                }
                members.sort();
                out.push(Context {
                    origin: ContextOrigin::Bipartite {
                        pairing: p,
                        left: li,
                        right: ri,
                    },
                    members,
                });
            }
        }
    }
    Ok(out)
}

/// Every maximum-size context the constructions produce for even `n`.
///
/// `n = 2` yields the six distinct contexts (the generator construction
/// repeats each one three times; the first occurrence is kept). `n = 4`
/// yields the 162 generated contexts followed by the 108 bipartite ones.
/// Larger `n` yields the `2 * 3^n` generated contexts. Generated contexts are
/// ordered by generator index then half.
pub fn all_contexts(n: usize) -> Result<Vec<Context>> {
    check_even(n)?;
    if n > MAX_CATALOG_QUBITS {
        return Err(Error::Resource(format!(
            "context catalog capped at n = {MAX_CATALOG_QUBITS} (requested {n})"
        )));
    }
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for generator in PauliWord::all(n)? {
        for half in [Half::Even, Half::Odd] {
            let ctx = generated_context(generator, half)?;
            if n == 2 && !seen.insert(ctx.members.clone()) {
                continue;
            }
            out.push(ctx);
        }
    }
    if n == 4 {
        out.extend(bipartite_contexts_n4()?);
    }
    Ok(out)
}

/// Only the generated contexts, `2 * 3^n` of them, including the `n = 2`
/// repeats. This is the family whose eigenstates the preparation circuit
/// reaches.
pub fn generated_contexts(n: usize) -> Result<Vec<Context>> {
    check_even(n)?;
    if n > MAX_CATALOG_QUBITS {
        return Err(Error::Resource(format!(
            "context catalog capped at n = {MAX_CATALOG_QUBITS} (requested {n})"
        )));
    }
    let mut out = Vec::new();
    for generator in PauliWord::all(n)? {
        for half in [Half::Even, Half::Odd] {
            out.push(generated_context(generator, half)?);
        }
    }
    Ok(out)
}

/// All maximal cliques of the commutation graph on the `3^n` full-weight
/// words, by Bron–Kerbosch with pivoting. Cliques are returned as sorted
/// member lists, themselves sorted.
pub fn brute_force_maximal_contexts(n: usize) -> Result<Vec<Vec<PauliWord>>> {
    check_even(n)?;
    if n > MAX_CLIQUE_QUBITS {
        return Err(Error::Resource(format!(
            "clique enumeration over 3^{n} vertices is not supported (max n = {MAX_CLIQUE_QUBITS})"
        )));
    }
    let words: Vec<_> = PauliWord::all(n)?.collect();
    let v = words.len();
    let mut adjacency = vec![0u128; v];
    for i in 0..v {
        for j in 0..v {
            if i != j && words[i].commutes_bits(&words[j]) {
                adjacency[i] |= 1 << j;
            }
        }
    }
    let all: u128 = if v == 128 { u128::MAX } else { (1u128 << v) - 1 };
    let mut cliques = Vec::new();
    bron_kerbosch(&adjacency, 0, all, 0, &mut cliques);
    let mut out: Vec<Vec<PauliWord>> = cliques
        .into_iter()
        .map(|set| {
            (0..v)
                .filter(|&i| set >> i & 1 == 1)
                .map(|i| words[i])
                .collect()
        })
        .collect();
    out.sort();
    Ok(out)
}

fn bron_kerbosch(adj: &[u128], r: u128, mut p: u128, mut x: u128, out: &mut Vec<u128>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let candidates = p | x;
    let pivot = (0..adj.len())
        .filter(|&u| candidates >> u & 1 == 1)
        .max_by_key(|&u| (p & adj[u]).count_ones())
        .expect("non-empty");
    let mut rest = p & !adj[pivot];
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Two-qubit Mermin–Peres square. Every row and column is a context; row
/// members multiply to `-1`, column members to `+1`.
#[derive(Clone, Debug)]
pub struct MagicSquare {
    grid: [[PauliWord; 3]; 3],
}

/// How many of the six product constraints a sign assignment satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SquareLabel {
    pub restrictions: u8,
    pub all_rows: bool,
    pub all_columns: bool,
}

impl SquareLabel {
    pub fn star(&self) -> bool {
        self.all_rows || self.all_columns
    }
}

impl MagicSquare {
    pub const ROW_SIGN: i8 = -1;
    pub const COLUMN_SIGN: i8 = 1;

    pub fn new() -> MagicSquare {
        let w = |s: &str| s.parse::<PauliWord>().expect("static word");
        MagicSquare {
            grid: [
                [w("XX"), w("YY"), w("ZZ")],
                [w("YZ"), w("ZX"), w("XY")],
                [w("ZY"), w("XZ"), w("YX")],
            ],
        }
    }

    pub fn grid(&self) -> &[[PauliWord; 3]; 3] {
        &self.grid
    }

    pub fn rows(&self) -> Vec<[PauliWord; 3]> {
        self.grid.to_vec()
    }

    pub fn columns(&self) -> Vec<[PauliWord; 3]> {
        (0..3)
            .map(|c| [self.grid[0][c], self.grid[1][c], self.grid[2][c]])
            .collect()
    }

    /// Operator product of a line of the square, phase included.
    pub fn line_product(line: &[PauliWord; 3]) -> GeneralPauli {
        line.iter()
            .skip(1)
            .fold(line[0].to_general(), |acc, w| {
                acc.multiply(&w.to_general()).expect("two-qubit words")
            })
    }

    /// Labels a sign assignment over the nine two-qubit words, indexed by
    /// word index (`signs[i]` belongs to `PauliWord::from_index(2, i)`).
    pub fn label(&self, signs: &[i8; 9]) -> SquareLabel {
        let product = |line: &[PauliWord; 3]| -> i8 {
            line.iter().map(|w| signs[w.index() as usize]).product()
        };
        let rows_ok = self
            .rows()
            .iter()
            .filter(|r| product(r) == Self::ROW_SIGN)
            .count();
        let cols_ok = self
            .columns()
            .iter()
            .filter(|c| product(c) == Self::COLUMN_SIGN)
            .count();
        SquareLabel {
            restrictions: (rows_ok + cols_ok) as u8,
            all_rows: rows_ok == 3,
            all_columns: cols_ok == 3,
        }
    }
}

impl Default for MagicSquare {
    fn default() -> Self {
        MagicSquare::new()
    }
}

/// Sign vector for a 9-bit configuration id: bit `i` set means word `i`
/// prefers `-1`.
pub fn signs_from_config_id(id: u16) -> [i8; 9] {
    let mut signs = [1i8; 9];
    for (i, s) in signs.iter_mut().enumerate() {
        if id >> i & 1 == 1 {
            *s = -1;
        }
    }
    signs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContextKind {
    #[serde(rename = "lemma1")]
    Lemma1,
    #[serde(rename = "bipartite-n4")]
    BipartiteN4,
}

/// One line of the JSON-lines context catalog.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextRecord {
    pub generator: Option<PauliWord>,
    pub half: Option<Half>,
    pub origin: ContextKind,
    pub members: Vec<PauliWord>,
}

impl ContextRecord {
    /// Decodes one JSON line and checks it describes a commuting set of
    /// equal-length words; generated records must match their construction.
    pub fn parse_line(line: &str) -> Result<ContextRecord> {
        let record: ContextRecord =
            serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        let first = self
            .members
            .first()
            .ok_or_else(|| Error::Parse("context without members".into()))?;
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                if !commutes(a, b).map_err(|e| Error::Parse(e.to_string()))? {
                    return Err(Error::Parse(format!("members {a} and {b} do not commute")));
                }
            }
        }
        match (self.origin, self.generator, self.half) {
            (ContextKind::Lemma1, Some(g), Some(h)) => {
                if g.len() != first.len() {
                    return Err(Error::Parse("generator length differs from members".into()));
                }
                let expected = generated_context(g, h).map_err(|e| Error::Parse(e.to_string()))?;
                let mut members = self.members.clone();
                members.sort();
                if members != expected.members {
                    return Err(Error::Parse(format!(
                        "members do not match the context generated by {g} ({h})"
                    )));
                }
            }
            (ContextKind::Lemma1, _, _) => {
                return Err(Error::Parse("generated context without generator/half".into()))
            }
            (ContextKind::BipartiteN4, None, None) => {
                if first.len() != 4 || self.members.len() != 9 {
                    return Err(Error::Parse("bipartite contexts have 9 four-qubit members".into()));
                }
            }
            (ContextKind::BipartiteN4, _, _) => {
                return Err(Error::Parse("bipartite context carries a generator".into()))
            }
        }
        Ok(())
    }
}

/// Writes the catalog as JSON lines.
pub fn write_jsonl(contexts: &[Context], mut out: impl std::io::Write) -> Result<()> {
    for ctx in contexts {
        serde_json::to_writer(&mut out, &ctx.to_record())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    fn words(list: &[&str]) -> Vec<PauliWord> {
        let mut v: Vec<_> = list.iter().map(|s| w(s)).collect();
        v.sort();
        v
    }

    #[test]
    fn two_qubit_generated_contexts() {
        let even = generated_context(w("ZZ"), Half::Even).unwrap();
        assert_eq!(even.members(), words(&["ZZ", "XX", "YY"]).as_slice());
        let odd = generated_context(w("ZZ"), Half::Odd).unwrap();
        assert_eq!(odd.members(), words(&["ZZ", "XY", "YX"]).as_slice());
    }

    #[test]
    fn four_qubit_even_context_of_z() {
        let ctx = generated_context(w("ZZZZ"), Half::Even).unwrap();
        let expected = words(&[
            "ZZZZ", "XXXX", "XXYY", "XYXY", "XYYX", "YXXY", "YXYX", "YYXX", "YYYY",
        ]);
        assert_eq!(ctx.members(), expected.as_slice());
        assert!(ctx.is_commuting());
        assert_eq!(ctx.letter_disjoint_members(), vec![w("ZZZZ")]);
    }

    #[test]
    fn relabelled_generators_stay_commuting() {
        for g in ["XYZX", "YYYY", "XZZY"] {
            for half in [Half::Even, Half::Odd] {
                let ctx = generated_context(w(g), half).unwrap();
                assert_eq!(ctx.len(), 9);
                assert!(ctx.is_commuting(), "{g} {half}");
                assert_eq!(ctx.letter_disjoint_members(), vec![w(g)]);
            }
        }
    }

    #[test]
    fn odd_and_zero_sizes_rejected() {
        assert!(matches!(
            generated_context(w("ZZZ"), Half::Even),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(all_contexts(3), Err(Error::Unsupported(_))));
        assert!(matches!(all_contexts(0), Err(Error::Usage(_))));
        assert!(matches!(
            brute_force_maximal_contexts(6),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn counts_for_two_and_four_qubits() {
        let c2 = all_contexts(2).unwrap();
        assert_eq!(c2.len(), 6);
        assert!(c2.iter().all(|c| c.len() == 3));
        let c4 = all_contexts(4).unwrap();
        assert_eq!(c4.len(), 270);
        assert!(c4.iter().all(|c| c.len() == 9 && c.is_commuting()));
        let distinct: BTreeSet<_> = c4.iter().map(|c| c.members().to_vec()).collect();
        assert_eq!(distinct.len(), 270);
    }

    #[test]
    fn magic_square_signs() {
        let sq = MagicSquare::new();
        for row in sq.rows() {
            let p = MagicSquare::line_product(&row);
            assert!(p.is_identity());
            assert_eq!(p.phase().sign(), Some(-1));
        }
        for col in sq.columns() {
            let p = MagicSquare::line_product(&col);
            assert!(p.is_identity());
            assert_eq!(p.phase().sign(), Some(1));
        }
    }

    #[test]
    fn magic_square_lines_are_the_two_qubit_contexts() {
        let sq = MagicSquare::new();
        let lines: BTreeSet<Vec<PauliWord>> = sq
            .rows()
            .into_iter()
            .chain(sq.columns())
            .map(|l| {
                let mut v = l.to_vec();
                v.sort();
                v
            })
            .collect();
        let ctx: BTreeSet<Vec<PauliWord>> = all_contexts(2)
            .unwrap()
            .iter()
            .map(|c| c.members().to_vec())
            .collect();
        assert_eq!(lines, ctx);
    }

    #[test]
    fn no_assignment_satisfies_all_six() {
        let sq = MagicSquare::new();
        let mut seen = BTreeSet::new();
        for id in 0..512u16 {
            let label = sq.label(&signs_from_config_id(id));
            assert!(label.restrictions < 6);
            seen.insert(label.restrictions);
        }
        assert_eq!(seen, BTreeSet::from([1, 3, 5]));
    }

    #[test]
    fn record_round_trip_and_validation() {
        let ctx = generated_context(w("XYZX"), Half::Odd).unwrap();
        let line = serde_json::to_string(&ctx.to_record()).unwrap();
        assert_eq!(ContextRecord::parse_line(&line).unwrap(), ctx.to_record());
        let bad = line.replace("\"odd\"", "\"even\"");
        assert!(ContextRecord::parse_line(&bad).is_err());
        assert!(ContextRecord::parse_line("{\"generator\":null}").is_err());
        assert!(ContextRecord::parse_line(
            r#"{"generator":null,"half":null,"origin":"bipartite-n4","members":["XX","XY"]}"#
        )
        .is_err());
    }
}
