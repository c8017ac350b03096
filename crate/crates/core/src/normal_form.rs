//! Elements of a tower of free-product and HNN levels over a base group.
//!
//! Level `k` is either `G_k = G_{k-1} * <f1@k>` or the HNN extension
//! `G_k = <G_{k-1}, f@k | f⁻¹ t f = v>` with `v` an involution. An element is
//! stored at its minimal height: a level-`k` word always contains at least
//! one level-`k` stable letter, and its parts are canonical elements of
//! lower height. Canonical forms are unique, so `==` is group equality.
//!
//! At HNN levels uniqueness comes from a left-to-right sweep choosing, before
//! each `f`, a representative of `g<t>` and, before each `f⁻¹`, a
//! representative of `g<v>`: the member of the designated subgroup if there
//! is one, otherwise the smaller of the two.

use std::cmp::Ordering;
use std::fmt;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::base::{BaseElement, BaseGroup};
use crate::error::ParseError;
use crate::extension::{LevelDescriptor, LevelKind};
use crate::word::parse_atoms;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn exp(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Element {
    Base(BaseElement),
    Word(Arc<LevelWord>),
}

impl Element {
    pub fn height(&self) -> u32 {
        match self {
            Element::Base(_) => 0,
            Element::Word(w) => w.level,
        }
    }

    pub fn as_word(&self) -> Option<&LevelWord> {
        match self {
            Element::Word(w) => Some(w),
            Element::Base(_) => None,
        }
    }

    /// Number of level-`k` stable letters.
    pub fn f_length(&self, k: u32) -> usize {
        match self {
            Element::Word(w) if w.level == k => w.signs.len(),
            _ => 0,
        }
    }
}

/// An alternating word `g_0 f^{s_1} g_1 … f^{s_m} g_m` over one level.
#[derive(Clone, Debug)]
pub struct LevelWord {
    level: u32,
    parts: Vec<Element>,
    signs: Vec<Sign>,
    digest: OnceLock<u64>,
}

impl LevelWord {
    fn digest(&self) -> u64 {
        *self.digest.get_or_init(|| {
            let mut h = DefaultHasher::new();
            self.level.hash(&mut h);
            self.signs.hash(&mut h);
            self.parts.hash(&mut h);
            h.finish()
        })
    }
}

impl PartialEq for LevelWord {
    fn eq(&self, other: &LevelWord) -> bool {
        if let (Some(x), Some(y)) = (self.digest.get(), other.digest.get()) {
            if x != y {
                return false;
            }
        }
        self.level == other.level && self.signs == other.signs && self.parts == other.parts
    }
}

impl Eq for LevelWord {}

impl Hash for LevelWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.digest());
    }
}

impl LevelWord {
    pub fn new(level: u32, parts: Vec<Element>, signs: Vec<Sign>) -> LevelWord {
        assert_eq!(parts.len(), signs.len() + 1, "parts must interleave signs");
        assert!(parts.iter().all(|p| p.height() < level), "parts must lie below the level");
        LevelWord { level, parts, signs, digest: OnceLock::new() }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn parts(&self) -> &[Element] {
        &self.parts
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }
}

/// Input to the reduction functions: parent elements and stable letters in
/// any order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawToken {
    Part(Element),
    Letter(Sign),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Connector {
    One,
    T,
    V,
}

/// Connecting elements between two reduced words with the same
/// stable-letter signature: `h_i = w_{i-1} g_i z_i`.
///
/// `w[i]` is `w_i` for `i = 0..=m` and `z[i]` is `z_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrittonCertificate {
    pub w: Vec<Connector>,
    pub z: Vec<Connector>,
}

impl BrittonCertificate {
    pub fn identity(m: usize) -> BrittonCertificate {
        BrittonCertificate { w: vec![Connector::One; m + 1], z: vec![Connector::One; m + 1] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("stable-letter signatures differ")]
    SignatureMismatch,
}

/// A base group together with the levels built over it.
#[derive(Clone, Debug)]
pub struct Algebra {
    base: BaseGroup,
    pub(crate) levels: Vec<LevelDescriptor>,
    identity: Element,
    t: Element,
}

impl Algebra {
    pub fn new(base: BaseGroup) -> Algebra {
        let identity = Element::Base(base.identity());
        let t = Element::Base(base.t());
        Algebra { base, levels: Vec::new(), identity, t }
    }

    pub fn base(&self) -> &BaseGroup {
        &self.base
    }

    /// Number of levels above the base.
    pub fn top(&self) -> u32 {
        self.levels.len() as u32
    }

    /// Level `k`, 1-based.
    pub fn level(&self, k: u32) -> &LevelDescriptor {
        &self.levels[(k - 1) as usize]
    }

    pub fn levels(&self) -> &[LevelDescriptor] {
        &self.levels
    }

    pub fn identity(&self) -> Element {
        self.identity.clone()
    }

    pub fn is_identity(&self, x: &Element) -> bool {
        *x == self.identity
    }

    pub fn t(&self) -> Element {
        self.t.clone()
    }

    pub fn from_base(&self, x: BaseElement) -> Element {
        Element::Base(x)
    }

    /// The stable letter `f1@k` or `f@k` with the given sign.
    pub fn letter(&self, k: u32, sign: Sign) -> Element {
        Element::Word(Arc::new(LevelWord {
            level: k,
            parts: vec![self.identity(), self.identity()],
            signs: vec![sign],
            digest: OnceLock::new(),
        }))
    }

    /// `f2@k = t · f1@k · v⁻¹` at a free-product level.
    pub fn f2(&self, k: u32) -> Element {
        let lvl = self.level(k);
        assert_eq!(lvl.kind, LevelKind::Fp, "f2 exists only at free-product levels");
        self.mul(&self.mul(&self.t, &self.letter(k, Sign::Pos)), &lvl.v_inv)
    }

    fn build(&self, k: u32, mut parts: Vec<Element>, signs: Vec<Sign>) -> Element {
        if signs.is_empty() {
            parts.pop().unwrap()
        } else {
            Element::Word(Arc::new(LevelWord { level: k, parts, signs, digest: OnceLock::new() }))
        }
    }

    /// View of `x` as a level-`k` word; `x` must have height at most `k`.
    pub fn view(&self, k: u32, x: &Element) -> LevelWord {
        match x {
            Element::Word(w) if w.level == k => (**w).clone(),
            _ => {
                debug_assert!(x.height() < k);
                LevelWord { level: k, parts: vec![x.clone()], signs: vec![], digest: OnceLock::new() }
            }
        }
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        if let (Element::Base(a), Element::Base(b)) = (x, y) {
            return Element::Base(self.base.mul(a, b));
        }
        if self.is_identity(x) {
            return y.clone();
        }
        if self.is_identity(y) {
            return x.clone();
        }
        let (hx, hy) = (x.height(), y.height());
        let k = hx.max(hy);
        let hnn = self.level(k).kind == LevelKind::Hnn;
        if hy < k {
            let w = x.as_word().unwrap();
            let mut parts = w.parts.clone();
            let last = parts.len() - 1;
            parts[last] = self.mul(&parts[last], y);
            return self.build(k, parts, w.signs.clone());
        }
        if hx < k {
            let w = y.as_word().unwrap();
            let mut parts = w.parts.clone();
            parts[0] = self.mul(x, &parts[0]);
            if hnn {
                self.sweep(k, &mut parts, &w.signs, 0, 0);
            }
            return self.build(k, parts, w.signs.clone());
        }
        let (xw, yw) = (x.as_word().unwrap(), y.as_word().unwrap());
        let junction = xw.parts.len() - 1;
        let mut parts: Vec<Element> = xw.parts[..junction].to_vec();
        parts.push(self.mul(&xw.parts[junction], &yw.parts[0]));
        parts.extend(yw.parts[1..].iter().cloned());
        let mut signs = xw.signs.clone();
        signs.extend(yw.signs.iter().copied());
        let j = self.pinch_from(k, &mut parts, &mut signs, junction);
        if hnn {
            self.sweep(k, &mut parts, &signs, j, j);
        }
        self.build(k, parts, signs)
    }

    pub fn inv(&self, x: &Element) -> Element {
        match x {
            Element::Base(b) => Element::Base(self.base.inv(b)),
            Element::Word(w) => {
                let k = w.level;
                let mut parts: Vec<Element> = w.parts.iter().rev().map(|p| self.inv(p)).collect();
                let signs: Vec<Sign> = w.signs.iter().rev().map(|s| s.flip()).collect();
                if self.level(k).kind == LevelKind::Hnn {
                    self.sweep(k, &mut parts, &signs, 0, usize::MAX);
                }
                self.build(k, parts, signs)
            }
        }
    }

    pub fn pow(&self, x: &Element, n: i64) -> Element {
        let base = if n < 0 { self.inv(x) } else { x.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    pub fn product<'a>(&self, xs: impl IntoIterator<Item = &'a Element>) -> Element {
        xs.into_iter().fold(self.identity(), |acc, x| self.mul(&acc, x))
    }

    pub fn conj(&self, g: &Element, a: &Element) -> Element {
        self.mul(&self.mul(&self.inv(g), a), g)
    }

    /// The image of a pinch `f^{left} mid f^{right}` at level `k`, if any.
    pub fn pinch(&self, k: u32, left: Sign, mid: &Element, right: Sign) -> Option<Element> {
        if left == right {
            return None;
        }
        let lvl = self.level(k);
        if self.is_identity(mid) {
            return Some(self.identity());
        }
        match lvl.kind {
            LevelKind::Fp => None,
            LevelKind::Hnn => match left {
                Sign::Neg if *mid == self.t => Some(lvl.v.clone()),
                Sign::Pos if *mid == lvl.v => Some(self.t()),
                _ => None,
            },
        }
    }

    fn pinch_from(
        &self,
        k: u32,
        parts: &mut Vec<Element>,
        signs: &mut Vec<Sign>,
        mut j: usize,
    ) -> usize {
        while j > 0 && j < signs.len() {
            match self.pinch(k, signs[j - 1], &parts[j], signs[j]) {
                Some(image) => {
                    let merged = self.mul(&self.mul(&parts[j - 1], &image), &parts[j + 1]);
                    parts.splice(j - 1..=j + 1, [merged]);
                    signs.drain(j - 1..=j);
                    j -= 1;
                }
                None => break,
            }
        }
        j
    }

    /// `(z, w)` for a crossing: `g f = (g t) f v` and `g f⁻¹ = (g v) f⁻¹ t`.
    fn connectors(&self, k: u32, sign: Sign) -> (Element, Element) {
        let v = self.level(k).v.clone();
        match sign {
            Sign::Pos => (self.t(), v),
            Sign::Neg => (v, self.t()),
        }
    }

    /// Representative choice at one crossing; `Some(p·z)` when switching.
    fn switch(&self, p: &Element, z: &Element) -> Option<Element> {
        if self.in_a(p) {
            return None;
        }
        let alt = self.mul(p, z);
        if self.in_a(&alt) || self.cmp(&alt, p) == Ordering::Less {
            Some(alt)
        } else {
            None
        }
    }

    /// Canonicalizes crossings from `start` on. Parts past `settled` are
    /// known canonical, so the sweep stops at the first crossing beyond it
    /// that pushes nothing.
    fn sweep(&self, k: u32, parts: &mut [Element], signs: &[Sign], start: usize, settled: usize) {
        for i in start..signs.len() {
            let (z, w) = self.connectors(k, signs[i]);
            match self.switch(&parts[i], &z) {
                Some(alt) => {
                    parts[i] = alt;
                    parts[i + 1] = self.mul(&w, &parts[i + 1]);
                }
                None if i >= settled => break,
                None => {}
            }
        }
    }

    /// Free-product reduction at a free-product level.
    pub fn reduce_fp(&self, k: u32, tokens: &[RawToken]) -> LevelWord {
        assert_eq!(self.level(k).kind, LevelKind::Fp);
        self.reduce(k, tokens)
    }

    /// Britton reduction at an HNN level.
    pub fn reduce_britton(&self, k: u32, tokens: &[RawToken]) -> LevelWord {
        assert_eq!(self.level(k).kind, LevelKind::Hnn);
        self.reduce(k, tokens)
    }

    /// Reduces a raw word, applying pinches to a fixpoint.
    pub fn reduce(&self, k: u32, tokens: &[RawToken]) -> LevelWord {
        let mut parts: Vec<Element> = Vec::new();
        let mut signs: Vec<Sign> = Vec::new();
        let mut cur = self.identity();
        for token in tokens {
            match token {
                RawToken::Part(e) => {
                    assert!(e.height() < k, "raw parts must lie below the level");
                    cur = self.mul(&cur, e);
                }
                RawToken::Letter(s) => {
                    if let Some(&last) = signs.last() {
                        if let Some(image) = self.pinch(k, last, &cur, *s) {
                            signs.pop();
                            let prev = parts.pop().unwrap();
                            cur = self.mul(&prev, &image);
                            continue;
                        }
                    }
                    parts.push(std::mem::replace(&mut cur, self.identity()));
                    signs.push(*s);
                }
            }
        }
        parts.push(cur);
        LevelWord { level: k, parts, signs, digest: OnceLock::new() }
    }

    pub fn canonicalize(&self, w: &LevelWord) -> Element {
        self.canonicalize_with_certificate(w).0
    }

    /// Canonical form of a reduced word together with the certificate
    /// connecting the input to it.
    pub fn canonicalize_with_certificate(&self, w: &LevelWord) -> (Element, BrittonCertificate) {
        let k = w.level;
        let m = w.signs.len();
        let mut cert = BrittonCertificate::identity(m);
        let mut parts = w.parts.clone();
        if m > 0 && self.level(k).kind == LevelKind::Hnn {
            for i in 0..m {
                let (z, wv) = self.connectors(k, w.signs[i]);
                if let Some(alt) = self.switch(&parts[i], &z) {
                    parts[i] = alt;
                    parts[i + 1] = self.mul(&wv, &parts[i + 1]);
                    let (cz, cw) = match w.signs[i] {
                        Sign::Pos => (Connector::T, Connector::V),
                        Sign::Neg => (Connector::V, Connector::T),
                    };
                    cert.z[i] = cz;
                    cert.w[i + 1] = cw;
                }
            }
        }
        (self.build(k, parts, w.signs.clone()), cert)
    }

    fn connector_value(&self, k: u32, c: Connector) -> Element {
        match c {
            Connector::One => self.identity(),
            Connector::T => self.t(),
            Connector::V => self.level(k).v.clone(),
        }
    }

    /// Checks that `c` witnesses `x = y`: `w_0 = 1`, `z_{m+1} = 1`, the
    /// pairing of `(z_i, w_i)` with the sign of the `i`-th letter, and
    /// `h_i = w_{i-1} g_i z_i` where `g` are the parts of `x` and `h` those
    /// of `y`.
    pub fn check_certificate(
        &self,
        x: &LevelWord,
        y: &LevelWord,
        c: &BrittonCertificate,
    ) -> Result<bool, CertificateError> {
        if x.level != y.level || x.signs != y.signs {
            return Err(CertificateError::SignatureMismatch);
        }
        let m = x.signs.len();
        if c.w.len() != m + 1 || c.z.len() != m + 1 {
            return Ok(false);
        }
        if c.w[0] != Connector::One || c.z[m] != Connector::One {
            return Ok(false);
        }
        for i in 0..m {
            let allowed = match (x.signs[i], c.z[i], c.w[i + 1]) {
                (_, Connector::One, Connector::One) => true,
                (Sign::Pos, Connector::T, Connector::V) => true,
                (Sign::Neg, Connector::V, Connector::T) => true,
                _ => false,
            };
            if !allowed {
                return Ok(false);
            }
        }
        if m > 0 && self.level(x.level).kind == LevelKind::Fp {
            if c.z.iter().chain(&c.w).any(|&k| k != Connector::One) {
                return Ok(false);
            }
        }
        let k = x.level;
        for i in 0..=m {
            let lhs = self.mul(
                &self.mul(&self.connector_value(k, c.w[i]), &x.parts[i]),
                &self.connector_value(k, c.z[i]),
            );
            if lhs != y.parts[i] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Total order: height, then stable-letter count, then the part and
    /// sign sequence, parts compared recursively.
    pub fn cmp(&self, x: &Element, y: &Element) -> Ordering {
        if x == y {
            return Ordering::Equal;
        }
        match (x, y) {
            (Element::Base(a), Element::Base(b)) => self.base.cmp(a, b),
            (Element::Base(_), Element::Word(_)) => Ordering::Less,
            (Element::Word(_), Element::Base(_)) => Ordering::Greater,
            (Element::Word(a), Element::Word(b)) => a
                .level
                .cmp(&b.level)
                .then(a.signs.len().cmp(&b.signs.len()))
                .then_with(|| {
                    for i in 0..a.signs.len() {
                        let o = self.cmp(&a.parts[i], &b.parts[i]).then(a.signs[i].cmp(&b.signs[i]));
                        if o != Ordering::Equal {
                            return o;
                        }
                    }
                    let m = a.signs.len();
                    self.cmp(&a.parts[m], &b.parts[m])
                }),
        }
    }

    /// Letter names of level `k`.
    pub fn letter_names(&self, k: u32) -> Vec<String> {
        match self.level(k).kind {
            LevelKind::Fp => vec![format!("f1@{k}"), format!("f2@{k}")],
            LevelKind::Hnn => vec![format!("f@{k}")],
        }
    }

    fn atoms(&self, x: &Element, out: &mut Vec<(String, i64)>) {
        match x {
            Element::Base(b) => {
                if self.base.is_identity(b) {
                    return;
                }
                for atom in self.base.format(b).split(' ') {
                    let (name, exp) = match atom.split_once('^') {
                        Some((n, e)) => (n.to_string(), e.parse().unwrap()),
                        None => (atom.to_string(), 1),
                    };
                    out.push((name, exp));
                }
            }
            Element::Word(w) => {
                let name = match self.level(w.level).kind {
                    LevelKind::Fp => format!("f1@{}", w.level),
                    LevelKind::Hnn => format!("f@{}", w.level),
                };
                for i in 0..w.signs.len() {
                    self.atoms(&w.parts[i], out);
                    match out.last_mut() {
                        Some((n, e)) if *n == name => *e += w.signs[i].exp(),
                        _ => out.push((name.clone(), w.signs[i].exp())),
                    }
                }
                self.atoms(&w.parts[w.signs.len()], out);
            }
        }
    }

    /// Word literal of `x`, re-parseable by [`Algebra::parse`].
    pub fn format(&self, x: &Element) -> String {
        let mut atoms = Vec::new();
        self.atoms(x, &mut atoms);
        if atoms.is_empty() {
            return "1".into();
        }
        atoms
            .iter()
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn display<'a>(&'a self, x: &'a Element) -> Display<'a> {
        Display { algebra: self, element: x }
    }

    /// Value of a generator name: a base generator or a stable letter
    /// `f1@k`, `f2@k`, `f@k` of an existing level.
    pub fn generator(&self, name: &str) -> Option<Element> {
        if let Some((stem, k)) = name.split_once('@') {
            let k: u32 = k.parse().ok()?;
            if k == 0 || k > self.top() {
                return None;
            }
            return match (stem, self.level(k).kind) {
                ("f1", LevelKind::Fp) => Some(self.letter(k, Sign::Pos)),
                ("f2", LevelKind::Fp) => Some(self.f2(k)),
                ("f", LevelKind::Hnn) => Some(self.letter(k, Sign::Pos)),
                _ => None,
            };
        }
        self.base.generator(name).map(Element::Base)
    }

    pub fn parse(&self, text: &str) -> Result<Element, ParseError> {
        let mut acc = self.identity();
        for atom in parse_atoms(text)? {
            let Some(name) = atom.name else { continue };
            let g = self
                .generator(&name)
                .ok_or(ParseError::UnknownGenerator { name, pos: atom.pos })?;
            acc = self.mul(&acc, &self.pow(&g, atom.exp));
        }
        Ok(acc)
    }

    /// Total number of letters when spelled with the generators.
    pub fn word_length(&self, x: &Element) -> usize {
        match x {
            Element::Base(b) => self.base.len(b),
            Element::Word(w) => {
                w.signs.len() + w.parts.iter().map(|p| self.word_length(p)).sum::<usize>()
            }
        }
    }
}

pub struct Display<'a> {
    algebra: &'a Algebra,
    element: &'a Element,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.algebra.format(self.element))
    }
}
