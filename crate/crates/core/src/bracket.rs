//! Canonical bracket monomials for the free anticommutative ("almost") and
//! free Lie flavors over m abstract generators.
//!
//! A monomial is a full binary tree with generator indices at the leaves.
//! The almost flavor imposes antisymmetry only: a tree is canonical iff at
//! every internal node the left subtree strictly precedes the right one in
//! the tree order (degree-major, then recursive left/right comparison,
//! generators by index). The lie flavor additionally imposes Jacobi: the
//! canonical monomials are the standard bracketings of Lyndon words, and
//! normalization goes through the associative envelope, where the expansion
//! of a Lyndon bracketing is triangular with respect to the lexicographic
//! order of words.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Flavor {
    Almost,
    Lie,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Almost => f.write_str("almost"),
            Flavor::Lie => f.write_str("lie"),
        }
    }
}

/// Full binary tree with 0-based generator indices at the leaves.
/// Rendered 1-based: `e1`, `[e1,[e1,e2]]`, ...
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TreeMonomial {
    Leaf(usize),
    Node(Box<TreeMonomial>, Box<TreeMonomial>),
}

impl TreeMonomial {
    pub fn leaf(index: usize) -> Self {
        TreeMonomial::Leaf(index)
    }

    pub fn node(left: TreeMonomial, right: TreeMonomial) -> Self {
        TreeMonomial::Node(Box::new(left), Box::new(right))
    }

    /// Number of leaves.
    pub fn degree(&self) -> usize {
        match self {
            TreeMonomial::Leaf(_) => 1,
            TreeMonomial::Node(l, r) => l.degree() + r.degree(),
        }
    }

    pub fn max_leaf(&self) -> usize {
        match self {
            TreeMonomial::Leaf(i) => *i,
            TreeMonomial::Node(l, r) => l.max_leaf().max(r.max_leaf()),
        }
    }

    /// Leaf word in left-to-right order.
    pub fn word(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        self.collect_word(&mut out);
        out
    }

    fn collect_word(&self, out: &mut Vec<usize>) {
        match self {
            TreeMonomial::Leaf(i) => out.push(*i),
            TreeMonomial::Node(l, r) => {
                l.collect_word(out);
                r.collect_word(out);
            }
        }
    }

    pub fn render(&self) -> String {
        match self {
            TreeMonomial::Leaf(i) => format!("e{}", i + 1),
            TreeMonomial::Node(l, r) => format!("[{},{}]", l.render(), r.render()),
        }
    }

    /// Parses the textual syntax: generators `e1`, `e2`, ...; brackets
    /// `[A,B]` nested arbitrarily. Whitespace is allowed.
    pub fn parse(text: &str) -> Result<TreeMonomial> {
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let t = parse_tree(bytes, &mut pos)?;
        skip_ws(bytes, &mut pos);
        if pos != bytes.len() {
            return Err(Error::Syntax {
                pos,
                msg: "unexpected trailing input in monomial".to_string(),
            });
        }
        Ok(t)
    }
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_tree(bytes: &[u8], pos: &mut usize) -> Result<TreeMonomial> {
    skip_ws(bytes, pos);
    if *pos >= bytes.len() {
        return Err(Error::Syntax {
            pos: *pos,
            msg: "unexpected end of monomial".to_string(),
        });
    }
    match bytes[*pos] {
        b'[' => {
            *pos += 1;
            let left = parse_tree(bytes, pos)?;
            skip_ws(bytes, pos);
            if *pos >= bytes.len() || bytes[*pos] != b',' {
                return Err(Error::Syntax {
                    pos: *pos,
                    msg: "expected `,` in bracket".to_string(),
                });
            }
            *pos += 1;
            let right = parse_tree(bytes, pos)?;
            skip_ws(bytes, pos);
            if *pos >= bytes.len() || bytes[*pos] != b']' {
                return Err(Error::Syntax {
                    pos: *pos,
                    msg: "expected `]` closing bracket".to_string(),
                });
            }
            *pos += 1;
            Ok(TreeMonomial::node(left, right))
        }
        b'e' => {
            *pos += 1;
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if start == *pos {
                return Err(Error::Syntax {
                    pos: *pos,
                    msg: "expected generator index after `e`".to_string(),
                });
            }
            let idx: usize = std::str::from_utf8(&bytes[start..*pos])
                .unwrap()
                .parse()
                .map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "generator index out of range".to_string(),
                })?;
            if idx == 0 {
                return Err(Error::Syntax {
                    pos: start,
                    msg: "generator indices are 1-based".to_string(),
                });
            }
            Ok(TreeMonomial::leaf(idx - 1))
        }
        other => Err(Error::Syntax {
            pos: *pos,
            msg: format!("unexpected character `{}` in monomial", other as char),
        }),
    }
}

impl Ord for TreeMonomial {
    /// Degree-major, then left subtree, then right subtree; generators by
    /// index. Degree-1 elements therefore sort before any proper bracket.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            match (self, other) {
                (TreeMonomial::Leaf(a), TreeMonomial::Leaf(b)) => a.cmp(b),
                (TreeMonomial::Node(l1, r1), TreeMonomial::Node(l2, r2)) => {
                    l1.cmp(l2).then_with(|| r1.cmp(r2))
                }
                // Equal degrees can only pair a leaf with a leaf or a node
                // with a node, but keep the order total.
                (TreeMonomial::Leaf(_), TreeMonomial::Node(..)) => Ordering::Less,
                (TreeMonomial::Node(..), TreeMonomial::Leaf(_)) => Ordering::Greater,
            }
        })
    }
}

impl PartialOrd for TreeMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TreeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Integer combination of canonical monomials; no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SignedCombination {
    terms: BTreeMap<TreeMonomial, i64>,
}

impl SignedCombination {
    pub fn zero() -> Self {
        SignedCombination::default()
    }

    pub fn single(t: TreeMonomial, c: i64) -> Self {
        let mut s = SignedCombination::zero();
        s.add_term(t, c);
        s
    }

    pub fn add_term(&mut self, t: TreeMonomial, c: i64) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &SignedCombination) -> SignedCombination {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), *c);
        }
        out
    }

    pub fn scale(&self, c: i64) -> SignedCombination {
        if c == 0 {
            return SignedCombination::zero();
        }
        SignedCombination {
            terms: self.terms.iter().map(|(t, k)| (t.clone(), k * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TreeMonomial, i64)> {
        self.terms.iter().map(|(t, c)| (t, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn check_leaves(t: &TreeMonomial, m: usize) -> Result<()> {
    if t.max_leaf() >= m {
        return Err(Error::GeneratorOutOfRange {
            index: t.max_leaf() + 1,
            count: m,
        });
    }
    Ok(())
}

/// Rewrites a tree into the canonical almost-flavor form using antisymmetry
/// only, collecting the sign; equal children give zero.
pub fn canonicalize_almost(t: &TreeMonomial, m: usize) -> Result<SignedCombination> {
    check_leaves(t, m)?;
    Ok(match canon_rec(t) {
        Some((tree, sign)) => SignedCombination::single(tree, sign),
        None => SignedCombination::zero(),
    })
}

fn canon_rec(t: &TreeMonomial) -> Option<(TreeMonomial, i64)> {
    match t {
        TreeMonomial::Leaf(i) => Some((TreeMonomial::Leaf(*i), 1)),
        TreeMonomial::Node(l, r) => {
            let (lc, ls) = canon_rec(l)?;
            let (rc, rs) = canon_rec(r)?;
            match lc.cmp(&rc) {
                Ordering::Equal => None,
                Ordering::Less => Some((TreeMonomial::node(lc, rc), ls * rs)),
                Ordering::Greater => Some((TreeMonomial::node(rc, lc), -ls * rs)),
            }
        }
    }
}

/// True when the tree is canonical for the flavor.
pub fn is_canonical(t: &TreeMonomial, flavor: Flavor) -> bool {
    match flavor {
        Flavor::Almost => match t {
            TreeMonomial::Leaf(_) => true,
            TreeMonomial::Node(l, r) => {
                l < r && is_canonical(l, Flavor::Almost) && is_canonical(r, Flavor::Almost)
            }
        },
        Flavor::Lie => {
            let w = t.word();
            is_lyndon(&w) && *t == lyndon_bracketing(&w)
        }
    }
}

/// Words over generator indices with integer coefficients: the degree-d part
/// of the free associative algebra.
type WordSum = BTreeMap<Vec<usize>, i64>;

fn word_add(acc: &mut WordSum, w: Vec<usize>, c: i64) {
    if c == 0 {
        return;
    }
    use std::collections::btree_map::Entry;
    match acc.entry(w) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let sum = e.get() + c;
            if sum == 0 {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// Expands a bracket tree in the free associative algebra: [a,b] = ab - ba.
pub(crate) fn expand_to_words(t: &TreeMonomial) -> WordSum {
    match t {
        TreeMonomial::Leaf(i) => {
            let mut out = WordSum::new();
            out.insert(vec![*i], 1);
            out
        }
        TreeMonomial::Node(l, r) => {
            let le = expand_to_words(l);
            let re = expand_to_words(r);
            let mut out = WordSum::new();
            for (wl, cl) in &le {
                for (wr, cr) in &re {
                    let mut ab = wl.clone();
                    ab.extend_from_slice(wr);
                    word_add(&mut out, ab, cl * cr);
                    let mut ba = wr.clone();
                    ba.extend_from_slice(wl);
                    word_add(&mut out, ba, -cl * cr);
                }
            }
            out
        }
    }
}

/// True iff the word is strictly smaller than all of its proper suffixes.
pub(crate) fn is_lyndon(w: &[usize]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|i| w < &w[i..])
}

/// Standard bracketing of a Lyndon word: factor w = uv with v the
/// lexicographically least proper suffix (equivalently the longest proper
/// Lyndon suffix) and bracket recursively.
pub(crate) fn lyndon_bracketing(w: &[usize]) -> TreeMonomial {
    if w.len() == 1 {
        return TreeMonomial::Leaf(w[0]);
    }
    let mut split = 1;
    for i in 2..w.len() {
        if w[i..] < w[split..] {
            split = i;
        }
    }
    TreeMonomial::node(lyndon_bracketing(&w[..split]), lyndon_bracketing(&w[split..]))
}

/// Expands a tree in the Lyndon basis of the free Lie algebra. The input
/// expands to a Lie element of the associative algebra; its lexicographically
/// least word is always Lyndon, and subtracting that multiple of the
/// corresponding Lyndon bracketing strictly raises the least word, so the
/// decomposition terminates.
pub fn normalize_lie(t: &TreeMonomial, m: usize) -> Result<SignedCombination> {
    check_leaves(t, m)?;
    let mut rem = expand_to_words(t);
    let mut out = SignedCombination::zero();
    while let Some((w, &c)) = rem.iter().next() {
        let w = w.clone();
        debug_assert!(
            is_lyndon(&w),
            "least word of a Lie element must be Lyndon: {w:?}"
        );
        let basis_tree = lyndon_bracketing(&w);
        let expansion = expand_to_words(&basis_tree);
        for (ew, ec) in expansion {
            word_add(&mut rem, ew, -c * ec);
        }
        out.add_term(basis_tree, c);
    }
    Ok(out)
}

/// Normalizes a tree in the given flavor.
pub fn normalize(t: &TreeMonomial, m: usize, flavor: Flavor) -> Result<SignedCombination> {
    match flavor {
        Flavor::Almost => canonicalize_almost(t, m),
        Flavor::Lie => normalize_lie(t, m),
    }
}

/// All Lyndon words of length exactly `d` over `0..m`, in lexicographic
/// order (Duval's generation algorithm).
pub(crate) fn lyndon_words(m: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 || d == 0 {
        return out;
    }
    let mut w = vec![0usize];
    loop {
        if w.len() == d {
            out.push(w.clone());
        }
        // Extend periodically to length d, then increment.
        let len = w.len();
        while w.len() < d {
            let c = w[w.len() - len];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == m - 1 {
                w.pop();
            } else {
                break;
            }
        }
        if w.is_empty() {
            break;
        }
        *w.last_mut().unwrap() += 1;
    }
    out
}

/// Complete duplicate-free list of canonical degree-d monomials, in tree
/// order for the almost flavor and Lyndon-word order for the lie flavor.
pub fn enumerate_basis(m: usize, d: usize, flavor: Flavor) -> Vec<TreeMonomial> {
    assert!(m >= 1 && d >= 1, "enumerate_basis needs m >= 1 and d >= 1");
    match flavor {
        Flavor::Lie => lyndon_words(m, d)
            .iter()
            .map(|w| lyndon_bracketing(w))
            .collect(),
        Flavor::Almost => {
            // Memoized by degree: canonical trees of degree d are pairs
            // (left, right) of canonical trees with left < right in the
            // tree order; degree-major ordering makes every (i, d-i) pair
            // with i < d-i automatic.
            let mut by_degree: Vec<Vec<TreeMonomial>> = vec![Vec::new(); d + 1];
            if d >= 1 {
                by_degree[1] = (0..m).map(TreeMonomial::Leaf).collect();
            }
            for deg in 2..=d {
                let mut level = Vec::new();
                for i in 1..=(deg - 1) / 2 {
                    let j = deg - i;
                    for l in &by_degree[i] {
                        for r in &by_degree[j] {
                            level.push(TreeMonomial::node(l.clone(), r.clone()));
                        }
                    }
                }
                if deg % 2 == 0 {
                    let half = &by_degree[deg / 2];
                    for (a, l) in half.iter().enumerate() {
                        for r in &half[a + 1..] {
                            level.push(TreeMonomial::node(l.clone(), r.clone()));
                        }
                    }
                }
                level.sort();
                by_degree[deg] = level;
            }
            by_degree[d].clone()
        }
    }
}

/// Number of canonical degree-d monomials.
pub fn graded_dimension(m: usize, d: usize, flavor: Flavor) -> usize {
    enumerate_basis(m, d, flavor).len()
}
