//! The lazily grown tower: resolution of `f_{u,v}`, and the action of the
//! tower group on right cosets of its designated subgroup.

use crate::base::BaseGroup;
use crate::error::{ConfigError, ParseError, TowerError};
use crate::extension::{Branch, LevelKind};
use crate::normal_form::{Algebra, Element, Sign};

/// A point of the coset space: `A · rep`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetHandle {
    pub rep: Element,
    pub generation: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryEntry {
    pub level: u32,
    pub kind: LevelKind,
    pub v: Element,
    pub letters: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryRecord {
    pub u: Element,
    pub v: Element,
    pub answer: Element,
    /// The level created to answer the query, if any.
    pub extended: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub f: Element,
    pub extended: Option<u32>,
}

/// Outcome of the fixed-point search over sampled involutions and cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicReport {
    pub involutions: usize,
    pub cosets: usize,
    /// `(w, rep)` with `A·rep·w = A·rep`.
    pub fixed_points: Vec<(Element, Element)>,
}

impl CharacteristicReport {
    pub fn vacuous(&self) -> bool {
        self.involutions == 0 || self.cosets == 0
    }

    pub fn characteristic_two(&self) -> bool {
        self.fixed_points.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Tower {
    algebra: Algebra,
    generation: u64,
    log: Vec<QueryRecord>,
}

impl Tower {
    pub fn new(base: BaseGroup) -> Tower {
        Tower { algebra: Algebra::new(base), generation: 0, log: Vec::new() }
    }

    pub fn from_json(text: &str) -> Result<Tower, ConfigError> {
        Ok(Tower::new(BaseGroup::from_json(text)?))
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn top(&self) -> u32 {
        self.algebra.top()
    }

    pub fn parse(&self, text: &str) -> Result<Element, ParseError> {
        self.algebra.parse(text)
    }

    pub fn format(&self, x: &Element) -> String {
        self.algebra.format(x)
    }

    pub fn registry(&self) -> Vec<RegistryEntry> {
        self.algebra
            .levels()
            .iter()
            .map(|l| RegistryEntry {
                level: l.index,
                kind: l.kind,
                v: l.v.clone(),
                letters: self.algebra.letter_names(l.index),
            })
            .collect()
    }

    pub fn queries(&self) -> &[QueryRecord] {
        &self.log
    }

    /// The unique `f` (at the current state) with `A f = A u` and
    /// `A t f = A v`, without extending the tower.
    pub fn resolve_f_frozen(&self, u: &Element, v: &Element) -> Result<Option<Element>, TowerError> {
        let alg = &self.algebra;
        let vu = alg.mul(v, &alg.inv(u));
        if alg.in_a(&vu) {
            return Err(TowerError::EqualCosets { quotient: alg.format(&vu) });
        }
        if let Some(level) = alg.levels().iter().find(|l| l.v == vu) {
            return Ok(Some(alg.mul(&alg.letter(level.index, Sign::Pos), u)));
        }
        match alg.double_coset(&alg.t(), &vu) {
            Some(w) => alg.solve_in_ata(u, v, &w).map(Some),
            None => Ok(None),
        }
    }

    /// Resolves `f_{u,v}`, adding a level when no solution exists yet.
    pub fn resolve_f(&mut self, u: &Element, v: &Element) -> Result<Resolution, TowerError> {
        let resolution = match self.resolve_f_frozen(u, v)? {
            Some(f) => Resolution { f, extended: None },
            None => {
                let alg = &self.algebra;
                let vu = alg.mul(v, &alg.inv(u));
                let level = match alg.classify_branch(&vu)? {
                    Branch::Fp { v } => self.algebra.make_fp_level(&v)?,
                    Branch::Hnn { v_hat, .. } => self.algebra.make_hnn_level(&v_hat)?,
                };
                self.generation += 1;
                let f = self.algebra.mul(&self.algebra.letter(level, Sign::Pos), u);
                Resolution { f, extended: Some(level) }
            }
        };
        self.log.push(QueryRecord {
            u: u.clone(),
            v: v.clone(),
            answer: resolution.f.clone(),
            extended: resolution.extended,
        });
        Ok(resolution)
    }

    pub fn coset(&self, rep: Element) -> CosetHandle {
        CosetHandle { rep, generation: self.generation }
    }

    pub fn coset_eq(&self, x: &CosetHandle, y: &CosetHandle) -> bool {
        let alg = &self.algebra;
        alg.in_a(&alg.mul(&x.rep, &alg.inv(&y.rep)))
    }

    pub fn act(&self, x: &CosetHandle, g: &Element) -> CosetHandle {
        self.coset(self.algebra.mul(&x.rep, g))
    }

    fn distinct(&self, x: &CosetHandle, y: &CosetHandle) -> Result<(), TowerError> {
        if self.coset_eq(x, y) {
            let alg = &self.algebra;
            return Err(TowerError::EqualCosets {
                quotient: alg.format(&alg.mul(&y.rep, &alg.inv(&x.rep))),
            });
        }
        Ok(())
    }

    /// The element mapping `(x1, x2)` to `(y1, y2)`, possibly extending.
    pub fn transitive_witness(
        &mut self,
        x1: &CosetHandle,
        x2: &CosetHandle,
        y1: &CosetHandle,
        y2: &CosetHandle,
    ) -> Result<Element, TowerError> {
        self.distinct(x1, x2)?;
        self.distinct(y1, y2)?;
        let fx = self.resolve_f(&x1.rep, &x2.rep)?.f;
        let fy = self.resolve_f(&y1.rep, &y2.rep)?.f;
        Ok(self.algebra.mul(&self.algebra.inv(&fx), &fy))
    }

    /// As [`Tower::transitive_witness`] but never extending.
    pub fn transitive_witness_frozen(
        &self,
        x1: &CosetHandle,
        x2: &CosetHandle,
        y1: &CosetHandle,
        y2: &CosetHandle,
    ) -> Result<Option<Element>, TowerError> {
        self.distinct(x1, x2)?;
        self.distinct(y1, y2)?;
        let (Some(fx), Some(fy)) = (
            self.resolve_f_frozen(&x1.rep, &x2.rep)?,
            self.resolve_f_frozen(&y1.rep, &y2.rep)?,
        ) else {
            return Ok(None);
        };
        Ok(Some(self.algebra.mul(&self.algebra.inv(&fx), &fy)))
    }

    /// Searches for an involution fixing a coset: `A g w = A g`, i.e.
    /// `g w g⁻¹ ∈ A`.
    pub fn classify_characteristic(
        &self,
        involutions: &[Element],
        cosets: &[CosetHandle],
    ) -> CharacteristicReport {
        let alg = &self.algebra;
        let mut fixed_points = Vec::new();
        for w in involutions {
            for c in cosets {
                if alg.in_a(&alg.mul(&alg.mul(&c.rep, w), &alg.inv(&c.rep))) {
                    fixed_points.push((w.clone(), c.rep.clone()));
                }
            }
        }
        CharacteristicReport { involutions: involutions.len(), cosets: cosets.len(), fixed_points }
    }

    /// Two involutions that do not commute, taken from the top level:
    /// `(t, f1⁻¹ t f1)` over a free-product level, `(v, f⁻¹ v f)` over an
    /// HNN level with involution `v`.
    pub fn noncommuting_involutions(&self) -> Result<(Element, Element), TowerError> {
        let alg = &self.algebra;
        if alg.top() == 0 {
            return Err(TowerError::NoLevels);
        }
        let k = alg.top();
        let level = alg.level(k);
        let s = match level.kind {
            LevelKind::Fp => alg.t(),
            LevelKind::Hnn => level.v.clone(),
        };
        let s2 = alg.conj(&alg.letter(k, Sign::Pos), &s);
        for x in [&s, &s2] {
            if alg.is_identity(x) || !alg.is_identity(&alg.mul(x, x)) {
                return Err(TowerError::NotInvolution {
                    v: alg.format(x),
                    square: alg.format(&alg.mul(x, x)),
                });
            }
        }
        if alg.mul(&s, &s2) == alg.mul(&s2, &s) {
            return Err(TowerError::BadWitness(format!(
                "{} and {} commute",
                alg.format(&s),
                alg.format(&s2)
            )));
        }
        Ok((s, s2))
    }

    /// Adds a level without hypothesis checks.
    #[doc(hidden)]
    pub fn push_level_unchecked(&mut self, kind: LevelKind, v: Element) -> u32 {
        self.generation += 1;
        self.algebra.push_level_unchecked(kind, v)
    }

    /// Adds a level after the hypothesis checks of its kind.
    pub fn push_level(&mut self, kind: LevelKind, v: &Element) -> Result<u32, TowerError> {
        let level = match kind {
            LevelKind::Fp => self.algebra.make_fp_level(v)?,
            LevelKind::Hnn => self.algebra.make_hnn_level(v)?,
        };
        self.generation += 1;
        Ok(level)
    }

    pub(crate) fn push_query(&mut self, record: QueryRecord) {
        self.log.push(record);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn p(tower: &Tower, s: &str) -> Element {
        tower.parse(s).unwrap()
    }

    #[test]
    fn resolution_examples() {
        let mut tower = presets::seed_tower();
        let one = tower.algebra().identity();
        let r = tower.resolve_f(&one, &p(&tower, "t")).unwrap();
        assert_eq!(r, Resolution { f: one.clone(), extended: None });
        let r = tower.resolve_f(&one, &p(&tower, "t a")).unwrap();
        assert_eq!(r, Resolution { f: p(&tower, "a"), extended: None });
        assert_eq!(tower.generation(), 0);

        let r = tower.resolve_f(&one, &p(&tower, "t a t")).unwrap();
        assert_eq!(r.extended, Some(1));
        assert_eq!(r.f, p(&tower, "f1@1"));
        assert_eq!(tower.registry()[0].kind, LevelKind::Fp);
        assert_eq!(tower.generation(), 1);

        let r = tower.resolve_f(&one, &p(&tower, "t a t a^2 t")).unwrap();
        assert_eq!((r.f, r.extended), (p(&tower, "f@2"), Some(2)));
        assert_eq!(tower.registry()[1].kind, LevelKind::Hnn);
        assert_eq!(tower.queries().len(), 4);

        assert!(matches!(tower.resolve_f(&one, &p(&tower, "a")), Err(TowerError::EqualCosets { .. })));
    }

    #[test]
    fn answers_are_stable_under_growth() {
        let mut tower = presets::seed_tower();
        let (u, v) = (p(&tower, "t a"), p(&tower, "a t a t"));
        let first = tower.resolve_f(&u, &v).unwrap().f;
        for w in ["t a t", "t a^2 t a t a t"] {
            let (one, w) = (tower.algebra().identity(), p(&tower, w));
            tower.resolve_f(&one, &w).unwrap();
        }
        assert_eq!(tower.resolve_f(&u, &v).unwrap(), Resolution { f: first, extended: None });
    }

    #[test]
    fn cosets_and_action() {
        let tower = presets::two_level_tower();
        let c = |s: &str| tower.coset(p(&tower, s));
        assert!(tower.coset_eq(&c("1"), &c("a")));
        assert!(!tower.coset_eq(&c("1"), &c("t")));
        assert!(tower.coset_eq(&c("a t"), &c("t")));
        assert!(tower.coset_eq(&tower.act(&c("1"), &p(&tower, "f1@1")), &c("1")));
        assert!(tower.coset_eq(&tower.act(&c("t"), &p(&tower, "f1@1")), &c("t a t")));
        assert_eq!(tower.act(&c("t f@2"), &tower.algebra().identity()), c("t f@2"));
        let (g, h) = (p(&tower, "f@2 t a"), p(&tower, "f1@1^-1 t"));
        assert_eq!(
            tower.act(&tower.act(&c("a t"), &g), &h),
            tower.act(&c("a t"), &tower.algebra().mul(&g, &h))
        );
    }

    #[test]
    fn transitive_witnesses() {
        let mut tower = presets::two_level_tower();
        let c = |t: &Tower, s: &str| t.coset(p(t, s));
        let (a, at) = (c(&tower, "1"), c(&tower, "t"));
        assert_eq!(tower.transitive_witness(&a, &at, &a, &at).unwrap(), tower.algebra().identity());
        assert_eq!(tower.transitive_witness(&a, &at, &at, &a).unwrap(), tower.algebra().t());
        let (u, v) = (c(&tower, "t f1@1"), c(&tower, "f@2 a"));
        let f = tower.resolve_f(&u.rep, &v.rep).unwrap().f;
        assert_eq!(tower.transitive_witness(&a, &at, &u, &v).unwrap(), f);
        assert!(matches!(
            tower.transitive_witness_frozen(&a, &c(&tower, "a"), &a, &at),
            Err(TowerError::EqualCosets { .. })
        ));
    }

    #[test]
    fn characteristic_examples() {
        let tower = presets::two_level_tower();
        let alg = tower.algebra();
        let cosets: Vec<CosetHandle> =
            ["1", "t", "f1@1", "t f@2", "a t f1@1^-1"].iter().map(|s| tower.coset(p(&tower, s))).collect();
        let v_hat = alg.level(2).v.clone();
        let r = tower.classify_characteristic(&[alg.t(), alg.conj(&p(&tower, "f@2"), &alg.t()), v_hat], &cosets);
        assert!(r.characteristic_two() && !r.vacuous());
        assert!(tower.classify_characteristic(&[], &cosets).vacuous());
    }

    #[test]
    fn noncommuting_pairs() {
        let mut tower = presets::seed_tower();
        assert_eq!(tower.noncommuting_involutions(), Err(TowerError::NoLevels));
        let (one, v) = (tower.algebra().identity(), p(&tower, "t a t"));
        tower.resolve_f(&one, &v).unwrap();
        let (s, s2) = tower.noncommuting_involutions().unwrap();
        assert_eq!((s, s2), (p(&tower, "t"), p(&tower, "f1@1^-1 t f1@1")));

        let tower = presets::two_level_tower();
        let alg = tower.algebra();
        let (s, s2) = tower.noncommuting_involutions().unwrap();
        assert_eq!(s, p(&tower, "t a t a^2 t"));
        assert_eq!(s2, alg.conj(&p(&tower, "f@2"), &s));
        assert_ne!(alg.mul(&s, &s2), alg.mul(&s2, &s));
    }
}
