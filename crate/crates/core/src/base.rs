//! Base groups `(G, A, t)`: a group `G`, a designated subgroup `A` and an
//! involution `t` outside `A`.
//!
//! Two kinds are supported. A finite group given by its full Cayley table
//! with `A` a subset of the elements, and a free product `<t> * H` where `H`
//! is either a finite group (cyclic or given by a table) or a finitely
//! generated free group. In the free-product case `A` is either all of `H` or
//! a subgroup of a finite `H`.
//!
//! Elements carry a unique reduced form, so structural equality is group
//! equality. The total order is shortlex over the declared generator order,
//! with `t` last.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Letter key. Generator `i` is `2i`, its inverse `2i + 1`; in free-product
/// bases `t` comes after every factor letter.
pub type Letter = u32;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum HElem {
    Finite(u32),
    /// Freely reduced word, letters `±(i + 1)`.
    Free(Vec<i32>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Syllable {
    T,
    H(HElem),
}

/// An element of the base group in reduced form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum BaseElement {
    Table(u32),
    /// Alternating `t` / `H` syllables of a free product `<t> * H`.
    Word(Vec<Syllable>),
}

/// A finite group given by a Cayley table, with shortlex geodesics over a
/// set of named generators.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: u32,
    gens: Vec<(String, u32)>,
    geodesic: Vec<Vec<Letter>>,
}

impl FiniteGroup {
    pub fn from_table(
        table: &[Vec<u32>],
        gens: Vec<(String, u32)>,
    ) -> Result<FiniteGroup, ConfigError> {
        let n = table.len();
        if n == 0 {
            return Err(ConfigError::Invalid("empty Cayley table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(ConfigError::Invalid(format!(
                    "table row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &x in row {
                if x as usize >= n {
                    return Err(ConfigError::Invalid(format!(
                        "table entry {x} in row {i} out of range"
                    )));
                }
            }
            flat.extend_from_slice(row);
        }
        let at = |x: usize, y: usize| flat[x * n + y] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| ConfigError::Invalid("table has no identity".into()))?;
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| ConfigError::Invalid(format!("element {x} has no inverse")))?;
            inverse[x] = y as u32;
        }
        for x in 0..n {
            for y in 0..n {
                let xy = at(x, y);
                for z in 0..n {
                    if at(xy, z) != at(x, at(y, z)) {
                        return Err(ConfigError::Invalid(format!(
                            "table is not associative at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        for (name, e) in &gens {
            if *e as usize >= n {
                return Err(ConfigError::Invalid(format!(
                    "generator {name} refers to element {e}, out of range"
                )));
            }
        }
        let mut g = FiniteGroup {
            order: n,
            table: flat,
            inverse,
            identity: identity as u32,
            gens,
            geodesic: vec![],
        };
        g.geodesic = g.compute_geodesics()?;
        Ok(g)
    }

    /// Cyclic group of the given order on one generator, element `k` is `a^k`.
    pub fn cyclic(order: u32, name: &str) -> Result<FiniteGroup, ConfigError> {
        if order == 0 {
            return Err(ConfigError::Invalid("cyclic order must be positive".into()));
        }
        let table: Vec<Vec<u32>> = (0..order)
            .map(|i| (0..order).map(|j| (i + j) % order).collect())
            .collect();
        let gens = if order > 1 { vec![(name.to_string(), 1)] } else { vec![] };
        FiniteGroup::from_table(&table, gens)
    }

    fn letter_element(&self, l: Letter) -> u32 {
        let e = self.gens[(l / 2) as usize].1;
        if l % 2 == 0 {
            e
        } else {
            self.inverse[e as usize]
        }
    }

    fn compute_geodesics(&self) -> Result<Vec<Vec<Letter>>, ConfigError> {
        // BFS in letter order yields shortlex-least words.
        let mut geo: Vec<Option<Vec<Letter>>> = vec![None; self.order];
        geo[self.identity as usize] = Some(vec![]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            let word = geo[x as usize].clone().unwrap();
            for l in 0..(2 * self.gens.len()) as Letter {
                let y = self.mul(x, self.letter_element(l));
                if geo[y as usize].is_none() {
                    let mut w = word.clone();
                    w.push(l);
                    geo[y as usize] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        geo.into_iter()
            .enumerate()
            .map(|(i, w)| {
                w.ok_or_else(|| {
                    ConfigError::Invalid(format!("generators do not reach element {i}"))
                })
            })
            .collect()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.table[x as usize * self.order + y as usize]
    }

    pub fn inv(&self, x: u32) -> u32 {
        self.inverse[x as usize]
    }

    pub fn geodesic(&self, x: u32) -> &[Letter] {
        &self.geodesic[x as usize]
    }

    pub fn generator_names(&self) -> impl Iterator<Item = &str> {
        self.gens.iter().map(|(n, _)| n.as_str())
    }
}

/// The non-`t` free factor `H` of a free-product base.
#[derive(Clone, Debug)]
pub enum Factor {
    Finite(FiniteGroup),
    Free(Vec<String>),
}

impl Factor {
    fn identity(&self) -> HElem {
        match self {
            Factor::Finite(g) => HElem::Finite(g.identity()),
            Factor::Free(_) => HElem::Free(vec![]),
        }
    }

    fn is_identity(&self, h: &HElem) -> bool {
        match (self, h) {
            (Factor::Finite(g), HElem::Finite(x)) => *x == g.identity(),
            (_, HElem::Free(w)) => w.is_empty(),
            _ => false,
        }
    }

    fn mul(&self, x: &HElem, y: &HElem) -> HElem {
        match (self, x, y) {
            (Factor::Finite(g), HElem::Finite(a), HElem::Finite(b)) => HElem::Finite(g.mul(*a, *b)),
            (Factor::Free(_), HElem::Free(a), HElem::Free(b)) => {
                let mut out = a.clone();
                for &l in b {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                HElem::Free(out)
            }
            _ => unreachable!("mixed factor representations"),
        }
    }

    fn inv(&self, x: &HElem) -> HElem {
        match (self, x) {
            (Factor::Finite(g), HElem::Finite(a)) => HElem::Finite(g.inv(*a)),
            (_, HElem::Free(w)) => HElem::Free(w.iter().rev().map(|l| -l).collect()),
            _ => unreachable!("mixed factor representations"),
        }
    }

    fn letters(&self, x: &HElem) -> Vec<Letter> {
        match (self, x) {
            (Factor::Finite(g), HElem::Finite(a)) => g.geodesic(*a).to_vec(),
            (_, HElem::Free(w)) => w
                .iter()
                .map(|&l| 2 * (l.unsigned_abs() - 1) + u32::from(l < 0))
                .collect(),
            _ => unreachable!("mixed factor representations"),
        }
    }

    fn len(&self, x: &HElem) -> usize {
        match (self, x) {
            (Factor::Finite(g), HElem::Finite(a)) => g.geodesic(*a).len(),
            (_, HElem::Free(w)) => w.len(),
            _ => unreachable!("mixed factor representations"),
        }
    }

    fn letter_count(&self) -> u32 {
        match self {
            Factor::Finite(g) => 2 * g.gens.len() as u32,
            Factor::Free(names) => 2 * names.len() as u32,
        }
    }

    fn letter_element(&self, l: Letter) -> HElem {
        match self {
            Factor::Finite(g) => HElem::Finite(g.letter_element(l)),
            Factor::Free(_) => {
                let i = (l / 2) as i32 + 1;
                HElem::Free(vec![if l % 2 == 0 { i } else { -i }])
            }
        }
    }

    fn letter_name(&self, l: Letter) -> &str {
        match self {
            Factor::Finite(g) => &g.gens[(l / 2) as usize].0,
            Factor::Free(names) => &names[(l / 2) as usize],
        }
    }

    fn elements(&self) -> Option<Vec<HElem>> {
        match self {
            Factor::Finite(g) => Some((0..g.order() as u32).map(HElem::Finite).collect()),
            Factor::Free(names) if names.is_empty() => Some(vec![HElem::Free(vec![])]),
            Factor::Free(_) => None,
        }
    }
}

/// The designated subgroup inside `H`.
#[derive(Clone, Debug)]
pub enum FactorSubgroup {
    Whole,
    Subset(Vec<bool>),
}

#[derive(Clone, Debug)]
enum Kind {
    Table { group: FiniteGroup, a: Vec<bool>, t: u32 },
    FreeProduct { factor: Factor, a: FactorSubgroup, t_name: String },
}

/// `g = a · center · b` with `a, b ∈ A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCosetWitness {
    pub a: BaseElement,
    pub b: BaseElement,
    pub center: BaseElement,
}

/// A base group with its designated subgroup and involution.
#[derive(Clone, Debug)]
pub struct BaseGroup {
    kind: Kind,
    config: BaseConfig,
}

impl BaseGroup {
    pub fn from_config(config: &BaseConfig) -> Result<BaseGroup, ConfigError> {
        if config.schema_version != 1 {
            return Err(ConfigError::Invalid(format!(
                "unsupported schema_version {}",
                config.schema_version
            )));
        }
        let kind = match config.kind {
            ConfigKind::FiniteTable => Self::finite_table_kind(config)?,
            ConfigKind::FreeProduct => Self::free_product_kind(config)?,
        };
        let base = BaseGroup { kind, config: config.clone() };
        base.check_names()?;
        Ok(base)
    }

    pub fn from_json(text: &str) -> Result<BaseGroup, ConfigError> {
        let config: BaseConfig = serde_json::from_str(text)?;
        BaseGroup::from_config(&config)
    }

    pub fn config(&self) -> &BaseConfig {
        &self.config
    }

    fn finite_table_kind(config: &BaseConfig) -> Result<Kind, ConfigError> {
        let table = config
            .table
            .as_ref()
            .ok_or_else(|| ConfigError::Invalid("finite-table config needs a table".into()))?;
        let gens = config
            .generators
            .iter()
            .map(|g| match g {
                GeneratorDecl::Bound { name, element } => Ok((name.clone(), *element)),
                GeneratorDecl::Name(n) => Err(ConfigError::Invalid(format!(
                    "finite-table generator {n} needs an element index"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let group = FiniteGroup::from_table(table, gens)?;
        if group.order() == 1 {
            return Err(ConfigError::Invalid("the trivial group admits no involution t".into()));
        }
        let a = subset_from_decl(&config.a, &group)?;
        let t = match &config.t {
            Some(word) => Some(eval_table_word(&group, word)?),
            None => (0..group.order() as u32)
                .filter(|&x| {
                    x != group.identity()
                        && group.mul(x, x) == group.identity()
                        && !a[x as usize]
                })
                .min_by(|&x, &y| shortlex(group.geodesic(x), group.geodesic(y))),
        };
        match t {
            Some(t) => Ok(Kind::Table { group, a, t }),
            // No involution outside A: pass to G * <t>.
            None => Ok(Kind::FreeProduct {
                factor: Factor::Finite(group),
                a: FactorSubgroup::Subset(a),
                t_name: "t".into(),
            }),
        }
    }

    fn free_product_kind(config: &BaseConfig) -> Result<Kind, ConfigError> {
        let names: Vec<String> = config.generators.iter().map(|g| g.name().to_string()).collect();
        let factor = match config.factor.as_ref() {
            None => return Err(ConfigError::Invalid("free-product config needs a factor".into())),
            Some(FactorDecl::Named(s)) if s == "free" => Factor::Free(names),
            Some(FactorDecl::Named(s)) if s == "trivial" => {
                if !names.is_empty() {
                    return Err(ConfigError::Invalid("trivial factor takes no generators".into()));
                }
                Factor::Free(vec![])
            }
            Some(FactorDecl::Named(s)) => {
                return Err(ConfigError::Invalid(format!("unknown factor {s:?}")))
            }
            Some(FactorDecl::Cyclic { cyclic }) => {
                if names.len() != 1 {
                    return Err(ConfigError::Invalid(
                        "cyclic factor takes exactly one generator".into(),
                    ));
                }
                Factor::Finite(FiniteGroup::cyclic(*cyclic, &names[0])?)
            }
            Some(FactorDecl::Table { table }) => {
                let gens = config
                    .generators
                    .iter()
                    .map(|g| match g {
                        GeneratorDecl::Bound { name, element } => Ok((name.clone(), *element)),
                        GeneratorDecl::Name(n) => Err(ConfigError::Invalid(format!(
                            "table factor generator {n} needs an element index"
                        ))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Factor::Finite(FiniteGroup::from_table(table, gens)?)
            }
        };
        let a = match (&config.a, &factor) {
            (ADecl::Named(s), _) if s == "factor" => FactorSubgroup::Whole,
            (ADecl::Members(_), Factor::Finite(g)) => {
                FactorSubgroup::Subset(subset_from_decl(&config.a, g)?)
            }
            (ADecl::Members(_), Factor::Free(_)) => {
                return Err(ConfigError::Invalid(
                    "A must be the whole factor when the factor is free".into(),
                ))
            }
            (ADecl::Named(s), _) => {
                return Err(ConfigError::Invalid(format!("unknown A designation {s:?}")))
            }
        };
        let t_name = config.t.clone().unwrap_or_else(|| "t".into());
        Ok(Kind::FreeProduct { factor, a, t_name })
    }

    fn check_names(&self) -> Result<(), ConfigError> {
        let mut seen = HashSet::new();
        for name in self.generator_names() {
            if !is_valid_name(&name) || name.contains('@') {
                return Err(ConfigError::Invalid(format!("invalid generator name {name:?}")));
            }
            if !seen.insert(name.clone()) {
                return Err(ConfigError::Invalid(format!("duplicate generator name {name:?}")));
            }
        }
        Ok(())
    }

    /// Generator names in declared order (the involution last for free products).
    pub fn generator_names(&self) -> Vec<String> {
        match &self.kind {
            Kind::Table { group, .. } => group.generator_names().map(String::from).collect(),
            Kind::FreeProduct { factor, t_name, .. } => {
                let mut v: Vec<String> = (0..factor.letter_count() / 2)
                    .map(|i| factor.letter_name(2 * i).to_string())
                    .collect();
                v.push(t_name.clone());
                v
            }
        }
    }

    pub fn identity(&self) -> BaseElement {
        match &self.kind {
            Kind::Table { group, .. } => BaseElement::Table(group.identity()),
            Kind::FreeProduct { .. } => BaseElement::Word(vec![]),
        }
    }

    pub fn is_identity(&self, x: &BaseElement) -> bool {
        *x == self.identity()
    }

    pub fn t(&self) -> BaseElement {
        match &self.kind {
            Kind::Table { t, .. } => BaseElement::Table(*t),
            Kind::FreeProduct { .. } => BaseElement::Word(vec![Syllable::T]),
        }
    }

    pub fn mul(&self, x: &BaseElement, y: &BaseElement) -> BaseElement {
        match (&self.kind, x, y) {
            (Kind::Table { group, .. }, BaseElement::Table(a), BaseElement::Table(b)) => {
                BaseElement::Table(group.mul(*a, *b))
            }
            (Kind::FreeProduct { factor, .. }, BaseElement::Word(a), BaseElement::Word(b)) => {
                let mut out = a.clone();
                for s in b {
                    push_syllable(factor, &mut out, s.clone());
                }
                BaseElement::Word(out)
            }
            _ => unreachable!("element does not belong to this base group"),
        }
    }

    pub fn inv(&self, x: &BaseElement) -> BaseElement {
        match (&self.kind, x) {
            (Kind::Table { group, .. }, BaseElement::Table(a)) => BaseElement::Table(group.inv(*a)),
            (Kind::FreeProduct { factor, .. }, BaseElement::Word(w)) => BaseElement::Word(
                w.iter()
                    .rev()
                    .map(|s| match s {
                        Syllable::T => Syllable::T,
                        Syllable::H(h) => Syllable::H(factor.inv(h)),
                    })
                    .collect(),
            ),
            _ => unreachable!("element does not belong to this base group"),
        }
    }

    pub fn in_a(&self, x: &BaseElement) -> bool {
        match (&self.kind, x) {
            (Kind::Table { a, .. }, BaseElement::Table(i)) => a[*i as usize],
            (Kind::FreeProduct { a, .. }, BaseElement::Word(w)) => match w.as_slice() {
                [] => true,
                [Syllable::H(h)] => in_factor_subgroup(a, h),
                _ => false,
            },
            _ => unreachable!("element does not belong to this base group"),
        }
    }

    /// Word length over the declared generators and their inverses.
    pub fn len(&self, x: &BaseElement) -> usize {
        match (&self.kind, x) {
            (Kind::Table { group, .. }, BaseElement::Table(i)) => group.geodesic(*i).len(),
            (Kind::FreeProduct { factor, .. }, BaseElement::Word(w)) => w
                .iter()
                .map(|s| match s {
                    Syllable::T => 1,
                    Syllable::H(h) => factor.len(h),
                })
                .sum(),
            _ => unreachable!("element does not belong to this base group"),
        }
    }

    fn t_letter(&self) -> Letter {
        match &self.kind {
            Kind::Table { .. } => unreachable!("finite tables have no t letter"),
            Kind::FreeProduct { factor, .. } => factor.letter_count(),
        }
    }

    /// The shortlex-least geodesic spelling of `x`.
    pub fn letters(&self, x: &BaseElement) -> Vec<Letter> {
        match (&self.kind, x) {
            (Kind::Table { group, .. }, BaseElement::Table(i)) => group.geodesic(*i).to_vec(),
            (Kind::FreeProduct { factor, .. }, BaseElement::Word(w)) => {
                let t = self.t_letter();
                let mut out = Vec::new();
                for s in w {
                    match s {
                        Syllable::T => out.push(t),
                        Syllable::H(h) => out.extend(factor.letters(h)),
                    }
                }
                out
            }
            _ => unreachable!("element does not belong to this base group"),
        }
    }

    pub fn cmp(&self, x: &BaseElement, y: &BaseElement) -> Ordering {
        if x == y {
            return Ordering::Equal;
        }
        shortlex(&self.letters(x), &self.letters(y))
    }

    /// All letters of the generating alphabet with their values, in order.
    pub fn alphabet(&self) -> Vec<(Letter, BaseElement)> {
        match &self.kind {
            Kind::Table { group, .. } => (0..2 * group.gens.len() as Letter)
                .map(|l| (l, BaseElement::Table(group.letter_element(l))))
                .collect(),
            Kind::FreeProduct { factor, .. } => {
                let mut v: Vec<(Letter, BaseElement)> = (0..factor.letter_count())
                    .map(|l| (l, self.from_factor(factor.letter_element(l))))
                    .collect();
                v.push((self.t_letter(), self.t()));
                v
            }
        }
    }

    pub fn letter_name(&self, l: Letter) -> (&str, bool) {
        match &self.kind {
            Kind::Table { group, .. } => (&group.gens[(l / 2) as usize].0, l % 2 == 1),
            Kind::FreeProduct { factor, t_name, .. } => {
                if l == factor.letter_count() {
                    (t_name, false)
                } else {
                    (factor.letter_name(l), l % 2 == 1)
                }
            }
        }
    }

    /// Resolves a generator name to its element.
    pub fn generator(&self, name: &str) -> Option<BaseElement> {
        match &self.kind {
            Kind::Table { group, .. } => group
                .gens
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, e)| BaseElement::Table(*e)),
            Kind::FreeProduct { factor, t_name, .. } => {
                if name == t_name {
                    return Some(self.t());
                }
                (0..factor.letter_count() / 2)
                    .find(|&i| factor.letter_name(2 * i) == name)
                    .map(|i| self.from_factor(factor.letter_element(2 * i)))
            }
        }
    }

    /// Evaluates a word literal such as `t a^-1 t`.
    pub fn parse(&self, text: &str) -> Result<BaseElement, crate::error::ParseError> {
        let mut acc = self.identity();
        for atom in crate::word::parse_atoms(text)? {
            let Some(name) = atom.name else { continue };
            let g = self
                .generator(&name)
                .ok_or(crate::error::ParseError::UnknownGenerator { name, pos: atom.pos })?;
            let g = if atom.exp < 0 { self.inv(&g) } else { g };
            for _ in 0..atom.exp.unsigned_abs() {
                acc = self.mul(&acc, &g);
            }
        }
        Ok(acc)
    }

    fn from_factor(&self, h: HElem) -> BaseElement {
        match &self.kind {
            Kind::FreeProduct { factor, .. } if factor.is_identity(&h) => BaseElement::Word(vec![]),
            Kind::FreeProduct { .. } => BaseElement::Word(vec![Syllable::H(h)]),
            Kind::Table { .. } => unreachable!("finite tables have no factor"),
        }
    }

    /// Elements of `A` when `A` is finite.
    pub fn a_elements(&self) -> Option<Vec<BaseElement>> {
        match &self.kind {
            Kind::Table { group, a, .. } => Some(
                (0..group.order() as u32)
                    .filter(|&i| a[i as usize])
                    .map(BaseElement::Table)
                    .collect(),
            ),
            Kind::FreeProduct { factor, a, .. } => {
                let all = factor.elements()?;
                Some(
                    all.into_iter()
                        .filter(|h| in_factor_subgroup(a, h))
                        .map(|h| self.from_factor(h))
                        .collect(),
                )
            }
        }
    }

    /// Elements of `G` when `G` is finite.
    pub fn elements(&self) -> Option<Vec<BaseElement>> {
        match &self.kind {
            Kind::Table { group, .. } => {
                Some((0..group.order() as u32).map(BaseElement::Table).collect())
            }
            Kind::FreeProduct { .. } => None,
        }
    }

    /// A generating set of `A` (inverses included), used to build `A`-words.
    pub fn a_generators(&self) -> Vec<BaseElement> {
        match &self.kind {
            Kind::FreeProduct { factor, a: FactorSubgroup::Whole, .. } => (0..factor
                .letter_count())
                .map(|l| self.from_factor(factor.letter_element(l)))
                .filter(|e| !self.is_identity(e))
                .collect(),
            _ => {
                let mut v = self.a_elements().unwrap_or_default();
                v.retain(|e| !self.is_identity(e));
                v.sort_by(|x, y| self.cmp(x, y));
                v
            }
        }
    }

    pub fn a_is_trivial(&self) -> bool {
        match &self.kind {
            Kind::FreeProduct { factor, a: FactorSubgroup::Whole, .. } => {
                factor.letter_count() == 0 || matches!(factor, Factor::Finite(g) if g.order() == 1)
            }
            _ => self.a_elements().is_some_and(|v| v.len() == 1),
        }
    }

    /// Decides `g ∈ A·x·A`, returning `(a, b)` with `g = a·x·b`.
    pub fn double_coset(&self, x: &BaseElement, g: &BaseElement) -> Option<DoubleCosetWitness> {
        let witness = |a: BaseElement, b: BaseElement| DoubleCosetWitness {
            a,
            b,
            center: x.clone(),
        };
        match (&self.kind, x, g) {
            (Kind::Table { .. }, _, _) => self.double_coset_search(x, g).map(|(a, b)| witness(a, b)),
            (Kind::FreeProduct { factor, a, .. }, BaseElement::Word(xw), BaseElement::Word(gw)) => {
                let (xh, xt) = split_at_t(factor, xw);
                let (gh, gt) = split_at_t(factor, gw);
                if xh.len() != gh.len() {
                    return None;
                }
                if xh.len() == 1 {
                    // Both in H.
                    return match a {
                        FactorSubgroup::Whole => Some(witness(
                            self.mul(g, &self.inv(x)),
                            self.identity(),
                        )),
                        FactorSubgroup::Subset(_) => {
                            self.double_coset_search(x, g).map(|(a, b)| witness(a, b))
                        }
                    };
                }
                let m = xh.len() - 1;
                if xt != gt || xh[1..m] != gh[1..m] {
                    return None;
                }
                let left = factor.mul(&gh[0], &factor.inv(&xh[0]));
                let right = factor.mul(&factor.inv(&xh[m]), &gh[m]);
                if in_factor_subgroup(a, &left) && in_factor_subgroup(a, &right) {
                    Some(witness(self.from_factor(left), self.from_factor(right)))
                } else {
                    None
                }
            }
            _ => unreachable!("element does not belong to this base group"),
        }
    }

    fn double_coset_search(
        &self,
        x: &BaseElement,
        g: &BaseElement,
    ) -> Option<(BaseElement, BaseElement)> {
        let a_elems = self.a_elements().expect("finite A");
        for a in &a_elems {
            let ax = self.mul(a, x);
            for b in &a_elems {
                if self.mul(&ax, b) == *g {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
        None
    }

    /// Every element of word length at most `max_len`, each once, in the
    /// shortlex order.
    pub fn enumerate(&self, max_len: usize) -> Vec<BaseElement> {
        let alphabet = self.alphabet();
        let mut seen: HashSet<BaseElement> = HashSet::new();
        let mut frontier = vec![self.identity()];
        seen.insert(self.identity());
        for _ in 0..max_len {
            let mut next = Vec::new();
            for x in &frontier {
                for (_, l) in &alphabet {
                    let y = self.mul(x, l);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        let mut all: Vec<BaseElement> = seen.into_iter().collect();
        all.sort_by(|x, y| self.cmp(x, y));
        all
    }

    /// Word literal for `x`: runs of one letter collapse to a power.
    pub fn format(&self, x: &BaseElement) -> String {
        let letters = self.letters(x);
        if letters.is_empty() {
            return "1".into();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            let (name, inverse) = self.letter_name(letters[i]);
            let run = (j - i) as i64;
            let exp = if inverse { -run } else { run };
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(name);
            if exp != 1 {
                let _ = write!(out, "^{exp}");
            }
            i = j;
        }
        out
    }
}

fn in_factor_subgroup(a: &FactorSubgroup, h: &HElem) -> bool {
    match (a, h) {
        (FactorSubgroup::Whole, _) => true,
        (FactorSubgroup::Subset(s), HElem::Finite(i)) => s[*i as usize],
        (FactorSubgroup::Subset(_), HElem::Free(w)) => w.is_empty(),
    }
}

fn push_syllable(factor: &Factor, out: &mut Vec<Syllable>, s: Syllable) {
    match (out.last_mut(), s) {
        (Some(Syllable::T), Syllable::T) => {
            out.pop();
        }
        (Some(Syllable::H(top)), Syllable::H(h)) => {
            let p = factor.mul(top, &h);
            if factor.is_identity(&p) {
                out.pop();
            } else {
                *top = p;
            }
        }
        (_, s) => out.push(s),
    }
}

/// Splits a free-product word into `H`-parts around its `t` letters:
/// `h_0 t h_1 t … t h_m`, with possibly trivial end parts.
fn split_at_t(factor: &Factor, w: &[Syllable]) -> (Vec<HElem>, usize) {
    let mut parts = vec![factor.identity()];
    let mut ts = 0;
    for s in w {
        match s {
            Syllable::T => {
                ts += 1;
                parts.push(factor.identity());
            }
            Syllable::H(h) => *parts.last_mut().unwrap() = h.clone(),
        }
    }
    (parts, ts)
}

pub(crate) fn shortlex(x: &[Letter], y: &[Letter]) -> Ordering {
    x.len().cmp(&y.len()).then_with(|| x.cmp(y))
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "1"
        && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '@' || c == '\'')
        && !name.starts_with(|c: char| c.is_ascii_digit())
}

fn subset_from_decl(decl: &ADecl, group: &FiniteGroup) -> Result<Vec<bool>, ConfigError> {
    let mut set = vec![false; group.order()];
    match decl {
        ADecl::Named(s) if s == "trivial" => set[group.identity() as usize] = true,
        ADecl::Named(s) => {
            return Err(ConfigError::Invalid(format!("unknown A designation {s:?}")))
        }
        ADecl::Members(members) => {
            for m in members {
                let i = match m {
                    MemberDecl::Index(i) => *i,
                    MemberDecl::Word(w) => eval_table_word(group, w)?,
                };
                if i as usize >= group.order() {
                    return Err(ConfigError::Invalid(format!("A member {i} out of range")));
                }
                set[i as usize] = true;
            }
        }
    }
    if !set[group.identity() as usize] {
        return Err(ConfigError::Invalid("A must contain the identity".into()));
    }
    for x in 0..group.order() as u32 {
        for y in 0..group.order() as u32 {
            if set[x as usize] && set[y as usize] && !set[group.mul(x, y) as usize] {
                return Err(ConfigError::Invalid("A is not closed under multiplication".into()));
            }
        }
    }
    Ok(set)
}

fn eval_table_word(group: &FiniteGroup, text: &str) -> Result<u32, ConfigError> {
    let atoms = crate::word::parse_atoms(text)?;
    let mut acc = group.identity();
    for atom in atoms {
        let Some(name) = atom.name else { continue };
        let e = group
            .gens
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, e)| *e)
            .ok_or_else(|| crate::error::ParseError::UnknownGenerator {
                name: name.clone(),
                pos: atom.pos,
            })?;
        let base = if atom.exp < 0 { group.inv(e) } else { e };
        for _ in 0..atom.exp.unsigned_abs() {
            acc = group.mul(acc, base);
        }
    }
    Ok(acc)
}

/// JSON configuration of a base group.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BaseConfig {
    #[serde(default = "schema_one")]
    pub schema_version: u32,
    pub kind: ConfigKind,
    #[serde(default)]
    pub generators: Vec<GeneratorDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<FactorDecl>,
    #[serde(rename = "A")]
    pub a: ADecl,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
}

fn schema_one() -> u32 {
    1
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ConfigKind {
    FiniteTable,
    FreeProduct,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GeneratorDecl {
    Name(String),
    Bound { name: String, element: u32 },
}

impl GeneratorDecl {
    fn name(&self) -> &str {
        match self {
            GeneratorDecl::Name(n) => n,
            GeneratorDecl::Bound { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FactorDecl {
    /// `"free"` or `"trivial"`.
    Named(String),
    Cyclic { cyclic: u32 },
    Table { table: Vec<Vec<u32>> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ADecl {
    /// `"factor"` (free products) or `"trivial"` (finite tables).
    Named(String),
    Members(Vec<MemberDecl>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum MemberDecl {
    Index(u32),
    Word(String),
}

/// The canonical seed `<t> * <a | a^3>` with `A = <a>`.
pub fn seed_config() -> BaseConfig {
    BaseConfig {
        schema_version: 1,
        kind: ConfigKind::FreeProduct,
        generators: vec![GeneratorDecl::Name("a".into())],
        table: None,
        factor: Some(FactorDecl::Cyclic { cyclic: 3 }),
        a: ADecl::Named("factor".into()),
        t: Some("t".into()),
    }
}
