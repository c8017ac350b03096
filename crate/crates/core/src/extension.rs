//! One extension step: branch selection, level construction, membership in
//! the designated subgroup `A_k` and double-coset decisions.
//!
//! At a free-product level `A_k = A_{k-1} * <f1> * <f2>` with
//! `f2 = t f1 v⁻¹`; at an HNN level `A_k = A_{k-1} * <f>`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::TowerError;
use crate::normal_form::{Algebra, Element, Sign};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelKind {
    Fp,
    Hnn,
}

impl std::fmt::Display for LevelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LevelKind::Fp => "FP",
            LevelKind::Hnn => "HNN",
        })
    }
}

/// `y = p · t · q` with `p, q ∈ A_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossWitness {
    pub y: Element,
    pub p: Element,
    pub q: Element,
}

#[derive(Clone, Debug)]
pub struct LevelDescriptor {
    pub index: u32,
    pub kind: LevelKind,
    pub v: Element,
    pub v_inv: Element,
    /// Witnesses placing `t`, `v` (and `v⁻¹`) in `A_k t A_k`.
    pub cross: Vec<CrossWitness>,
}

/// Result of branch selection for a target `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Branch {
    Fp { v: Element },
    /// `v_hat = a · v` is an involution, where `v⁻¹ = a · v · b`.
    Hnn { v_hat: Element, a: Element, b: Element },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    F1,
    F2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipToken {
    A(Element),
    F1 { level: u32, sign: Sign },
    F2 { level: u32, sign: Sign },
    F { level: u32, sign: Sign },
}

/// A product of generators of `A_k` equal to the queried element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipFactorization {
    pub tokens: Vec<MembershipToken>,
}

/// `g = p · x · q` with `p, q ∈ A_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCosetLevelWitness {
    pub p: Element,
    pub q: Element,
}

type DcMemo = HashMap<(u32, Element, Element), Option<(Element, Element)>>;

impl Algebra {
    /// Membership in `A_k` for `k` the height of `x` (equivalently for any
    /// level at or above it).
    pub fn in_a(&self, x: &Element) -> bool {
        match x {
            Element::Base(b) => self.base().in_a(b),
            Element::Word(w) => match self.level(w.level()).kind {
                LevelKind::Hnn => w.parts().iter().all(|p| self.in_a(p)),
                LevelKind::Fp => self.fp_parse(x).is_some(),
            },
        }
    }

    /// `Linv`: the inverse of the left decoration of an `f1` occurrence.
    fn fp_left(&self, k: u32, p: Provenance, s: Sign) -> Element {
        match (p, s) {
            (Provenance::F1, _) => self.identity(),
            (Provenance::F2, Sign::Pos) => self.t(),
            (Provenance::F2, Sign::Neg) => self.level(k).v_inv.clone(),
        }
    }

    /// `Rinv`: the inverse of the right decoration of an `f1` occurrence.
    fn fp_right(&self, k: u32, p: Provenance, s: Sign) -> Element {
        match (p, s) {
            (Provenance::F1, _) => self.identity(),
            (Provenance::F2, Sign::Pos) => self.level(k).v.clone(),
            (Provenance::F2, Sign::Neg) => self.t(),
        }
    }

    /// Provenance of each `f1` occurrence of a free-product-level word in
    /// `A_k`, decided by dynamic programming over occurrences.
    fn fp_parse(&self, x: &Element) -> Option<Vec<Provenance>> {
        let w = x.as_word()?;
        let k = w.level();
        let (parts, signs) = (w.parts(), w.signs());
        let m = signs.len();
        const STATES: [Provenance; 2] = [Provenance::F1, Provenance::F2];
        let mut back: Vec<[Option<usize>; 2]> = Vec::with_capacity(m);
        let mut reach = [false; 2];
        for (si, &p) in STATES.iter().enumerate() {
            reach[si] = self.in_a(&self.mul(&parts[0], &self.fp_left(k, p, signs[0])));
        }
        back.push([None, None]);
        for i in 1..m {
            let mut next = [false; 2];
            let mut ptr = [None, None];
            for (si, &p) in STATES.iter().enumerate() {
                let left = self.mul(&parts[i], &self.fp_left(k, p, signs[i]));
                for (pi, &q) in STATES.iter().enumerate() {
                    if reach[pi] && self.in_a(&self.mul(&self.fp_right(k, q, signs[i - 1]), &left)) {
                        next[si] = true;
                        ptr[si] = Some(pi);
                        break;
                    }
                }
            }
            reach = next;
            back.push(ptr);
            if !reach[0] && !reach[1] {
                return None;
            }
        }
        let last = STATES.iter().enumerate().position(|(si, &p)| {
            reach[si] && self.in_a(&self.mul(&self.fp_right(k, p, signs[m - 1]), &parts[m]))
        })?;
        let mut path = vec![Provenance::F1; m];
        let mut state = last;
        for i in (0..m).rev() {
            path[i] = STATES[state];
            if let Some(prev) = back[i][state] {
                state = prev;
            }
        }
        Some(path)
    }

    /// Factorization of `x` over the generators of `A_k`, or `None` if
    /// `x ∉ A_k`.
    pub fn in_a_factorization(&self, x: &Element) -> Option<MembershipFactorization> {
        let mut tokens = Vec::new();
        match x {
            Element::Base(b) => {
                if !self.base().in_a(b) {
                    return None;
                }
                if !self.is_identity(x) {
                    tokens.push(MembershipToken::A(x.clone()));
                }
            }
            Element::Word(w) => {
                let k = w.level();
                let push_a = |tokens: &mut Vec<MembershipToken>, a: Element| {
                    if !self.is_identity(&a) {
                        tokens.push(MembershipToken::A(a));
                    }
                };
                match self.level(k).kind {
                    LevelKind::Hnn => {
                        if !w.parts().iter().all(|p| self.in_a(p)) {
                            return None;
                        }
                        for (i, &sign) in w.signs().iter().enumerate() {
                            push_a(&mut tokens, w.parts()[i].clone());
                            tokens.push(MembershipToken::F { level: k, sign });
                        }
                        push_a(&mut tokens, w.parts().last().unwrap().clone());
                    }
                    LevelKind::Fp => {
                        let path = self.fp_parse(x)?;
                        let (parts, signs) = (w.parts(), w.signs());
                        let mut right = self.identity();
                        for (i, (&p, &sign)) in path.iter().zip(signs).enumerate() {
                            let a = self.mul(&self.mul(&right, &parts[i]), &self.fp_left(k, p, sign));
                            push_a(&mut tokens, a);
                            tokens.push(match p {
                                Provenance::F1 => MembershipToken::F1 { level: k, sign },
                                Provenance::F2 => MembershipToken::F2 { level: k, sign },
                            });
                            right = self.fp_right(k, p, sign);
                        }
                        push_a(&mut tokens, self.mul(&right, parts.last().unwrap()));
                    }
                }
            }
        }
        Some(MembershipFactorization { tokens })
    }

    /// Multiplies out a factorization.
    pub fn evaluate_factorization(&self, f: &MembershipFactorization) -> Element {
        let mut acc = self.identity();
        for token in &f.tokens {
            let x = match token {
                MembershipToken::A(a) => a.clone(),
                MembershipToken::F1 { level, sign } | MembershipToken::F { level, sign } => {
                    self.letter(*level, *sign)
                }
                MembershipToken::F2 { level, sign } => self.pow(&self.f2(*level), sign.exp()),
            };
            acc = self.mul(&acc, &x);
        }
        acc
    }

    /// Decorations `(Dl, Dr)` with `Dl · f^sign · Dr ∈ A_k`.
    fn decorations(&self, k: u32, sign: Sign) -> [(Element, Element); 2] {
        let lvl = self.level(k);
        let second = match (lvl.kind, sign) {
            (LevelKind::Fp, Sign::Pos) => (self.t(), lvl.v_inv.clone()),
            (LevelKind::Hnn, Sign::Pos) => (self.t(), lvl.v.clone()),
            (_, Sign::Neg) => (lvl.v.clone(), self.t()),
        };
        [(self.identity(), self.identity()), second]
    }

    /// Writes `x = p · core · q` with `p, q ∈ A_k` and `core` admitting no
    /// further stripping of an `A_k`-letter at either end.
    fn strip(&self, k: u32, x: &Element) -> (Element, Element, Element) {
        let (mut p, mut core, mut q) = (self.identity(), x.clone(), self.identity());
        'left: while core.f_length(k) > 0 {
            let w = core.as_word().unwrap();
            let (sign, g) = (w.signs()[0], w.parts()[0].clone());
            for (dl, dr) in self.decorations(k, sign) {
                let a = self.mul(&g, &self.inv(&dl));
                if self.in_a(&a) {
                    let ax = self.mul(&a, &self.mul(&self.mul(&dl, &self.letter(k, sign)), &dr));
                    core = self.mul(&self.inv(&ax), &core);
                    p = self.mul(&p, &ax);
                    continue 'left;
                }
            }
            break;
        }
        'right: while core.f_length(k) > 0 {
            let w = core.as_word().unwrap();
            let (sign, g) = (*w.signs().last().unwrap(), w.parts().last().unwrap().clone());
            for (dl, dr) in self.decorations(k, sign) {
                let b = self.mul(&self.inv(&dr), &g);
                if self.in_a(&b) {
                    let xb = self.mul(&self.mul(&self.mul(&dl, &self.letter(k, sign)), &dr), &b);
                    core = self.mul(&core, &self.inv(&xb));
                    q = self.mul(&xb, &q);
                    continue 'right;
                }
            }
            break;
        }
        (p, core, q)
    }

    /// Decides `g ∈ A_k · x · A_k` for `k` the top level.
    pub fn double_coset(&self, x: &Element, g: &Element) -> Option<DoubleCosetLevelWitness> {
        self.double_coset_at(self.top(), x, g)
    }

    /// Decides `g ∈ A_k · x · A_k`; `x` and `g` must have height at most `k`.
    pub fn double_coset_at(&self, k: u32, x: &Element, g: &Element) -> Option<DoubleCosetLevelWitness> {
        let mut memo = DcMemo::new();
        self.dc(k, x, g, &mut memo).map(|(p, q)| DoubleCosetLevelWitness { p, q })
    }

    fn dc(&self, k: u32, x: &Element, g: &Element, memo: &mut DcMemo) -> Option<(Element, Element)> {
        if k == 0 {
            let (Element::Base(bx), Element::Base(bg)) = (x, g) else {
                unreachable!("height exceeds level")
            };
            return self
                .base()
                .double_coset(bx, bg)
                .map(|w| (Element::Base(w.a), Element::Base(w.b)));
        }
        let key = (k, x.clone(), g.clone());
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let result = self.dc_uncached(k, x, g, memo);
        memo.insert(key, result.clone());
        result
    }

    fn dc_uncached(
        &self,
        k: u32,
        x: &Element,
        g: &Element,
        memo: &mut DcMemo,
    ) -> Option<(Element, Element)> {
        if x == g {
            return Some((self.identity(), self.identity()));
        }
        let (x_in, g_in) = (self.in_a(x), self.in_a(g));
        if x_in || g_in {
            return (x_in && g_in).then(|| (self.mul(g, &self.inv(x)), self.identity()));
        }
        let (px, cx, qx) = self.strip(k, x);
        let (pg, cg, qg) = self.strip(k, g);
        let m = cx.f_length(k);
        if m != cg.f_length(k) {
            return None;
        }
        let (p, q) = if m == 0 {
            self.dc_flat(k, &cx, &cg, memo)?
        } else {
            self.dc_cores(k, &cx, &cg)?
        };
        // g = pg·cg·qg, cg = p·cx·q, cx = px⁻¹·x·qx⁻¹.
        Some((
            self.mul(&self.mul(&pg, &p), &self.inv(&px)),
            self.mul(&self.mul(&self.inv(&qx), &q), &qg),
        ))
    }

    /// Both cores lie in `G_{k-1}`: either they share an `A_{k-1}` double
    /// coset, or both lie in `A_{k-1} {t, v, v⁻¹} A_{k-1}`, which is one
    /// `A_k` double coset.
    fn dc_flat(&self, k: u32, c: &Element, d: &Element, memo: &mut DcMemo) -> Option<(Element, Element)> {
        if let Some(hit) = self.dc(k - 1, c, d, memo) {
            return Some(hit);
        }
        let (pc, qc) = self.t_class(k, c, memo)?;
        let (pd, qd) = self.t_class(k, d, memo)?;
        // t = pc⁻¹·c·qc⁻¹, d = pd·t·qd.
        Some((self.mul(&pd, &self.inv(&pc)), self.mul(&self.inv(&qc), &qd)))
    }

    fn t_class(&self, k: u32, y: &Element, memo: &mut DcMemo) -> Option<(Element, Element)> {
        for cw in &self.level(k).cross {
            if let Some((a, b)) = self.dc(k - 1, &cw.y, y, memo) {
                return Some((self.mul(&a, &cw.p), self.mul(&cw.q, &b)));
            }
        }
        None
    }

    /// Stripped cores of equal positive length: `cg = a·cx·b` with
    /// `a, b ∈ A_{k-1}`, matched through connectors at HNN levels.
    fn dc_cores(&self, k: u32, cx: &Element, cg: &Element) -> Option<(Element, Element)> {
        let (xw, gw) = (cx.as_word()?, cg.as_word()?);
        if xw.signs() != gw.signs() {
            return None;
        }
        let m = xw.signs().len();
        let (xp, gp) = (xw.parts(), gw.parts());
        match self.level(k).kind {
            LevelKind::Fp => {
                if xp[1..m] != gp[1..m] {
                    return None;
                }
                let a = self.mul(&gp[0], &self.inv(&xp[0]));
                let b = self.mul(&self.inv(&xp[m]), &gp[m]);
                (self.in_a(&a) && self.in_a(&b)).then_some((a, b))
            }
            LevelKind::Hnn => {
                let v = self.level(k).v.clone();
                let zw = |s: Sign| match s {
                    Sign::Pos => (self.t(), v.clone()),
                    Sign::Neg => (v.clone(), self.t()),
                };
                'choice: for flip in [false, true] {
                    let (z1, w1) = zw(xw.signs()[0]);
                    let (z, mut w) = if flip { (z1, w1) } else { (self.identity(), self.identity()) };
                    let a = self.mul(&self.mul(&gp[0], &z), &self.inv(&xp[0]));
                    if !self.in_a(&a) {
                        continue;
                    }
                    for i in 1..m {
                        let zi = self.mul(&self.mul(&self.inv(&xp[i]), &w), &gp[i]);
                        let (zs, ws) = zw(xw.signs()[i]);
                        w = if self.is_identity(&zi) {
                            self.identity()
                        } else if zi == zs {
                            ws
                        } else {
                            continue 'choice;
                        };
                    }
                    let b = self.mul(&self.inv(&self.mul(&w, &xp[m])), &gp[m]);
                    if self.in_a(&b) {
                        return Some((a, b));
                    }
                }
                None
            }
        }
    }

    /// Lemma-style branch selection for a target outside `A` and `AtA`,
    /// without checking those preconditions.
    pub fn select_branch(&self, v: &Element) -> Branch {
        let v_inv = self.inv(v);
        match self.double_coset(v, &v_inv) {
            None => Branch::Fp { v: v.clone() },
            Some(w) => Branch::Hnn { v_hat: self.mul(&w.p, v), a: w.p, b: w.q },
        }
    }

    /// Branch selection with its preconditions checked: `v ∉ A`, `v ∉ AtA`,
    /// and in the HNN case `(a·v)² = 1`.
    pub fn classify_branch(&self, v: &Element) -> Result<Branch, TowerError> {
        self.check_outside(v)?;
        let branch = self.select_branch(v);
        if let Branch::Hnn { v_hat, .. } = &branch {
            let sq = self.mul(v_hat, v_hat);
            if !self.is_identity(&sq) {
                return Err(TowerError::NotInvolution {
                    v: self.format(v_hat),
                    square: self.format(&sq),
                });
            }
        }
        Ok(branch)
    }

    fn check_outside(&self, v: &Element) -> Result<(), TowerError> {
        if self.in_a(v) {
            return Err(TowerError::InA { v: self.format(v) });
        }
        if let Some(w) = self.double_coset(&self.t(), v) {
            return Err(TowerError::InAtA {
                v: self.format(v),
                a: self.format(&w.p),
                b: self.format(&w.q),
            });
        }
        Ok(())
    }

    /// `f = b·u` from `v·u⁻¹ = a·t·b`; then `A f = A u` and `A t f = A v`.
    pub fn solve_in_ata(
        &self,
        u: &Element,
        v: &Element,
        witness: &DoubleCosetLevelWitness,
    ) -> Result<Element, TowerError> {
        let vu = self.mul(v, &self.inv(u));
        let rebuilt = self.mul(&self.mul(&witness.p, &self.t()), &witness.q);
        if rebuilt != vu || !self.in_a(&witness.p) || !self.in_a(&witness.q) {
            return Err(TowerError::BadWitness(format!(
                "({})·t·({}) does not give {} inside AtA",
                self.format(&witness.p),
                self.format(&witness.q),
                self.format(&vu)
            )));
        }
        Ok(self.mul(&witness.q, u))
    }

    /// Adds a free-product level over `v`, re-checking `v ∉ A`, `v ∉ AtA`
    /// and `v⁻¹ ∉ AvA`. Returns the new level index.
    pub fn make_fp_level(&mut self, v: &Element) -> Result<u32, TowerError> {
        self.check_outside(v)?;
        let v_inv = self.inv(v);
        if let Some(w) = self.double_coset(v, &v_inv) {
            return Err(TowerError::InverseInDoubleCoset {
                v: self.format(v),
                a: self.format(&w.p),
                b: self.format(&w.q),
            });
        }
        Ok(self.push_level_unchecked(LevelKind::Fp, v.clone()))
    }

    /// Adds an HNN level over the involution `v`, re-checking `v ∉ A`,
    /// `v ∉ AtA` and `v² = 1`. Returns the new level index.
    pub fn make_hnn_level(&mut self, v: &Element) -> Result<u32, TowerError> {
        let sq = self.mul(v, v);
        if !self.is_identity(&sq) || self.is_identity(v) {
            return Err(TowerError::NotInvolution { v: self.format(v), square: self.format(&sq) });
        }
        self.check_outside(v)?;
        Ok(self.push_level_unchecked(LevelKind::Hnn, v.clone()))
    }

    /// Adds a level without any hypothesis check. Levels built this way may
    /// violate malnormality; the certifier is expected to catch them.
    #[doc(hidden)]
    pub fn push_level_unchecked(&mut self, kind: LevelKind, v: Element) -> u32 {
        let index = self.top() + 1;
        let v_inv = self.inv(&v);
        self.levels.push(LevelDescriptor {
            index,
            kind,
            v: v.clone(),
            v_inv: v_inv.clone(),
            cross: Vec::new(),
        });
        let t = self.t();
        let f = self.letter(index, Sign::Pos);
        let f_inv = self.letter(index, Sign::Neg);
        let mut cross = vec![CrossWitness { y: t.clone(), p: self.identity(), q: self.identity() }];
        match kind {
            LevelKind::Fp => {
                let f2 = self.f2(index);
                let f2_inv = self.inv(&f2);
                cross.push(CrossWitness { y: v.clone(), p: f2_inv, q: f.clone() });
                cross.push(CrossWitness { y: v_inv, p: f_inv, q: f2 });
            }
            LevelKind::Hnn => cross.push(CrossWitness { y: v.clone(), p: f_inv, q: f }),
        }
        for cw in &cross {
            debug_assert_eq!(self.mul(&self.mul(&cw.p, &t), &cw.q), cw.y);
        }
        self.levels.last_mut().unwrap().cross = cross;
        index
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn p(alg: &Algebra, s: &str) -> Element {
        alg.parse(s).unwrap()
    }

    fn seed() -> Algebra {
        presets::seed_tower().algebra().clone()
    }

    #[test]
    fn branch_selection() {
        let alg = seed();
        assert_eq!(alg.classify_branch(&p(&alg, "t a t")), Ok(Branch::Fp { v: p(&alg, "t a t") }));

        let ta = p(&alg, "t a");
        match alg.select_branch(&ta) {
            Branch::Hnn { v_hat, a, b } => {
                assert_eq!(v_hat, p(&alg, "a^2 t a"));
                assert_eq!(a, p(&alg, "a^2"));
                assert_eq!(alg.product([&a, &ta, &b]), alg.inv(&ta));
                assert!(alg.is_identity(&alg.mul(&v_hat, &v_hat)));
            }
            other => panic!("expected the HNN branch, got {other:?}"),
        }
        assert!(matches!(alg.classify_branch(&ta), Err(TowerError::InAtA { .. })));

        let s = p(&alg, "t a t a^2 t");
        assert_eq!(
            alg.classify_branch(&s),
            Ok(Branch::Hnn { v_hat: s.clone(), a: alg.identity(), b: alg.identity() })
        );
        assert!(matches!(alg.classify_branch(&p(&alg, "a")), Err(TowerError::InA { .. })));
    }

    #[test]
    fn solutions_inside_ata() {
        let alg = seed();
        let one = alg.identity();
        let w = |p_: &str, q: &str| DoubleCosetLevelWitness { p: p(&alg, p_), q: p(&alg, q) };
        assert_eq!(alg.solve_in_ata(&one, &alg.t(), &w("1", "1")), Ok(one.clone()));
        assert_eq!(alg.solve_in_ata(&one, &p(&alg, "a t"), &w("a", "1")), Ok(one.clone()));
        assert_eq!(alg.solve_in_ata(&one, &p(&alg, "t a"), &w("1", "a")), Ok(p(&alg, "a")));
        assert!(matches!(alg.solve_in_ata(&one, &p(&alg, "t a"), &w("a", "1")), Err(TowerError::BadWitness(_))));
    }

    #[test]
    fn free_product_level() {
        let mut alg = seed();
        let v = p(&alg, "t a t");
        assert_eq!(alg.make_fp_level(&v), Ok(1));
        let (t, f1, f2) = (alg.t(), alg.letter(1, Sign::Pos), alg.f2(1));
        assert!(alg.in_a(&alg.mul(&alg.mul(&t, &f1), &alg.inv(&v))));
        assert_eq!(
            alg.in_a_factorization(&f2).unwrap().tokens,
            vec![MembershipToken::F2 { level: 1, sign: Sign::Pos }]
        );
        assert_eq!(alg.in_a_factorization(&p(&alg, "t f1@1 t a^2 t")), alg.in_a_factorization(&f2));
        assert_eq!(alg.in_a_factorization(&p(&alg, "f1@1 t")), None);
        let a = p(&alg, "a");
        assert_eq!(alg.in_a_factorization(&a).unwrap().tokens, vec![MembershipToken::A(a)]);
        let mut pow = alg.identity();
        for _ in 1..=12 {
            pow = alg.mul(&pow, &f2);
            assert!(!alg.is_identity(&pow));
        }
        let w = alg.double_coset_at(1, &t, &v).unwrap();
        assert_eq!((w.p, w.q), (alg.inv(&f2), f1));
    }

    #[test]
    fn hnn_level() {
        let mut alg = seed();
        alg.make_fp_level(&p(&alg, "t a t")).unwrap();
        let v = p(&alg, "t a t a^2 t");
        assert_eq!(alg.make_hnn_level(&v), Ok(2));
        let (t, f) = (alg.t(), alg.letter(2, Sign::Pos));
        assert_eq!(alg.conj(&f, &t), v);
        assert_eq!(
            alg.in_a_factorization(&f).unwrap().tokens,
            vec![MembershipToken::F { level: 2, sign: Sign::Pos }]
        );
        assert!(!alg.in_a(&t));
        let w = alg.double_coset_at(2, &t, &v).unwrap();
        assert_eq!(alg.product([&w.p, &t, &w.q]), v);
        assert!(alg.in_a(&w.p) && alg.in_a(&w.q));
    }

    #[test]
    fn double_coset_of_itself() {
        let alg = presets::two_level_tower().algebra().clone();
        for s in ["t f@2 a", "f1@1 t f2@1^-1", "t"] {
            let x = p(&alg, s);
            let w = alg.double_coset(&x, &x).unwrap();
            assert!(alg.is_identity(&w.p) && alg.is_identity(&w.q));
        }
    }

    #[test]
    fn construction_rejects_bad_targets() {
        let mut alg = seed();
        assert!(matches!(alg.make_hnn_level(&p(&alg, "t a t")), Err(TowerError::NotInvolution { .. })));
        assert!(matches!(alg.make_hnn_level(&p(&alg, "a^2 t a")), Err(TowerError::InAtA { .. })));
        assert!(matches!(alg.make_fp_level(&p(&alg, "a t a")), Err(TowerError::InAtA { .. })));
        assert!(matches!(
            alg.make_fp_level(&p(&alg, "t a t a^2 t")),
            Err(TowerError::InverseInDoubleCoset { .. })
        ));
        assert_eq!(alg.top(), 0);
    }

    #[test]
    fn lifting_preserves_membership() {
        let alg = presets::two_level_tower().algebra().clone();
        let seed = seed();
        let ball = crate::certifier::enumerate_ball(&seed, 0, 4);
        for g in &ball.elements {
            assert_eq!(alg.in_a(g), seed.in_a(g));
        }
        assert!(alg.is_identity(&alg.mul(&alg.t(), &alg.t())));
    }
}
