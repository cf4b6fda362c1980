//! Stabilizer chains for subgroups of PGL(2,q) acting on the projective line.
//!
//! The base is (∞, 0, 1). PGL(2,q) is sharply 3-transitive, so the pointwise
//! stabilizer of the base is trivial and the chain has three levels.

use rustc_hash::FxHashMap;

use crate::field::FieldElement;
use crate::projective::{Pgl, ProjElement, ProjPoint};

const DENSE_LIMIT: u128 = 1 << 20;

enum PointIndex {
    Dense(Vec<u32>),
    Sparse(FxHashMap<u128, u32>),
}

impl PointIndex {
    fn new(q: u128) -> PointIndex {
        if q < DENSE_LIMIT {
            PointIndex::Dense(vec![u32::MAX; q as usize + 1])
        } else {
            PointIndex::Sparse(FxHashMap::default())
        }
    }

    #[inline]
    fn get(&self, pt: u128) -> Option<usize> {
        match self {
            PointIndex::Dense(v) => {
                let k = v[pt as usize];
                (k != u32::MAX).then_some(k as usize)
            }
            PointIndex::Sparse(m) => m.get(&pt).map(|&k| k as usize),
        }
    }

    fn insert(&mut self, pt: u128, k: usize) {
        match self {
            PointIndex::Dense(v) => v[pt as usize] = k as u32,
            PointIndex::Sparse(m) => {
                m.insert(pt, k as u32);
            }
        }
    }
}

struct Level {
    base: u128,
    gens: Vec<ProjElement>,
    orbit: Vec<u128>,
    reps: Vec<ProjElement>,
    inv_reps: Vec<ProjElement>,
    index: PointIndex,
    done: Vec<usize>,
}

impl Level {
    fn new(base: u128, q: u128) -> Level {
        let mut index = PointIndex::new(q);
        index.insert(base, 0);
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            reps: vec![ProjElement::IDENTITY],
            inv_reps: vec![ProjElement::IDENTITY],
            index,
            done: vec![0],
        }
    }
}

pub struct StabChain<'a> {
    pg: &'a Pgl,
    levels: Vec<Level>,
}

impl<'a> StabChain<'a> {
    pub fn new(pg: &'a Pgl, gens: &[ProjElement]) -> StabChain<'a> {
        let q = pg.q();
        let levels = vec![Level::new(q, q), Level::new(0, q), Level::new(1, q)];
        let mut sc = StabChain { pg, levels };
        for g in gens {
            sc.add_generator(g);
        }
        sc
    }

    #[inline]
    fn image(&self, g: &ProjElement, pt: u128) -> u128 {
        let z = if pt == self.pg.q() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Affine(FieldElement(pt))
        };
        self.pg.point_index(self.pg.apply(g, z))
    }

    /// Strips `h` through the chain from level `start`; returns the residue
    /// and the level where it left the known orbits.
    fn sift_from(&self, mut h: ProjElement, start: usize) -> Option<(ProjElement, usize)> {
        for l in start..self.levels.len() {
            let lv = &self.levels[l];
            let pt = self.image(&h, lv.base);
            match lv.index.get(pt) {
                None => return Some((h, l)),
                Some(k) => h = self.pg.mul(&lv.inv_reps[k], &h),
            }
        }
        debug_assert!(h.is_identity());
        None
    }

    pub fn add_generator(&mut self, g: &ProjElement) {
        if let Some((r, j)) = self.sift_from(*g, 0) {
            for l in 0..=j {
                self.levels[l].gens.push(r);
            }
            self.close();
        }
    }

    fn close(&mut self) {
        'outer: loop {
            for l in (0..self.levels.len()).rev() {
                if self.step(l) {
                    continue 'outer;
                }
            }
            return;
        }
    }

    /// Processes pending (orbit point, generator) pairs at level `l` until a
    /// residue is pushed deeper. Returns whether anything changed.
    fn step(&mut self, l: usize) -> bool {
        let mut changed = false;
        let mut k = 0;
        while k < self.levels[l].orbit.len() {
            while self.levels[l].done[k] < self.levels[l].gens.len() {
                let lv = &self.levels[l];
                let s = lv.gens[lv.done[k]];
                let beta = lv.orbit[k];
                let rep = lv.reps[k];
                self.levels[l].done[k] += 1;
                changed = true;
                let gamma = self.image(&s, beta);
                match self.levels[l].index.get(gamma) {
                    None => {
                        let u = self.pg.mul(&s, &rep);
                        let lv = &mut self.levels[l];
                        let pos = lv.orbit.len();
                        lv.orbit.push(gamma);
                        lv.inv_reps.push(self.pg.inv(&u));
                        lv.reps.push(u);
                        lv.index.insert(gamma, pos);
                        lv.done.push(0);
                    }
                    Some(g_idx) => {
                        if l + 1 == self.levels.len() {
                            continue;
                        }
                        let h = self.pg.mul3(&self.levels[l].inv_reps[g_idx], &s, &rep);
                        if let Some((r, j)) = self.sift_from(h, l + 1) {
                            for m in l + 1..=j {
                                self.levels[m].gens.push(r);
                            }
                            return true;
                        }
                    }
                }
            }
            k += 1;
        }
        changed
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|lv| lv.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &ProjElement) -> bool {
        self.sift_from(*g, 0).is_none()
    }

    /// Every element, as products of transversal representatives.
    pub fn elements(&self) -> Vec<ProjElement> {
        let [l0, l1, l2] = [&self.levels[0], &self.levels[1], &self.levels[2]];
        let mut out = Vec::with_capacity(self.order() as usize);
        for u0 in &l0.reps {
            for u1 in &l1.reps {
                let u01 = self.pg.mul(u0, u1);
                for u2 in &l2.reps {
                    out.push(self.pg.mul(&u01, u2));
                }
            }
        }
        out
    }

    /// Size of the orbit of infinity.
    pub fn base_orbit_len(&self) -> usize {
        self.levels[0].orbit.len()
    }
}
