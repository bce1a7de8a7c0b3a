//! Deterministic Schreier–Sims stabilizer chains for permutation groups.

use num_bigint::BigUint;
use rand::Rng;

use crate::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    base_point: u32,
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    // transversal[γ] maps the base point to γ; inverse kept alongside for sifting
    transversal: Vec<Option<(Permutation, Permutation)>>,
}

impl Level {
    fn new(degree: usize, base_point: u32) -> Level {
        let mut level = Level { base_point, gens: Vec::new(), orbit: Vec::new(), transversal: Vec::new() };
        level.rebuild(degree);
        level
    }

    fn rebuild(&mut self, degree: usize) {
        let id = Permutation::identity(degree);
        self.transversal = vec![None; degree];
        self.transversal[self.base_point as usize] = Some((id.clone(), id));
        self.orbit = vec![self.base_point];
        let mut head = 0;
        while head < self.orbit.len() {
            let gamma = self.orbit[head];
            head += 1;
            for s in &self.gens {
                let img = s.apply(gamma);
                if self.transversal[img as usize].is_none() {
                    let u = s.compose(&self.transversal[gamma as usize].as_ref().unwrap().0);
                    let inv = u.inverse();
                    self.transversal[img as usize] = Some((u, inv));
                    self.orbit.push(img);
                }
            }
        }
    }
}

/// A base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Run Schreier–Sims on the given generators.
    pub fn new(degree: usize, gens: &[Permutation]) -> StabChain {
        let mut chain = StabChain { degree, levels: Vec::new() };
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.is_empty() {
            return chain;
        }
        for g in &gens {
            if chain.levels.iter().all(|l| g.apply(l.base_point) == l.base_point) {
                let moved = (0..degree as u32).find(|&i| g.apply(i) != i).unwrap();
                chain.levels.push(Level::new(degree, moved));
            }
        }
        for i in 0..chain.levels.len() {
            let fixing: Vec<Permutation> = gens
                .iter()
                .filter(|g| chain.levels[..i].iter().all(|l| g.apply(l.base_point) == l.base_point))
                .cloned()
                .collect();
            chain.levels[i].gens = fixing;
            chain.levels[i].rebuild(degree);
        }

        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            match chain.failing_schreier_generator(lvl) {
                Some((residue, drop_level)) => {
                    if drop_level == chain.levels.len() {
                        let moved = (0..degree as u32).find(|&p| residue.apply(p) != p).unwrap();
                        chain.levels.push(Level::new(degree, moved));
                    }
                    for l in (lvl + 1)..=drop_level {
                        chain.levels[l].gens.push(residue.clone());
                        chain.levels[l].rebuild(degree);
                    }
                    i = drop_level as isize;
                }
                None => i -= 1,
            }
        }
        chain
    }

    fn failing_schreier_generator(&self, lvl: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[lvl];
        for &gamma in &level.orbit {
            let u_gamma = &level.transversal[gamma as usize].as_ref().unwrap().0;
            for s in &level.gens {
                let img = s.apply(gamma);
                let u_img_inv = &level.transversal[img as usize].as_ref().unwrap().1;
                let h = u_img_inv.compose(&s.compose(u_gamma));
                let (residue, drop_level) = self.sift_from(h, lvl + 1);
                if drop_level < self.levels.len() || !residue.is_identity() {
                    return Some((residue, drop_level));
                }
            }
        }
        None
    }

    /// Sift starting at `start`; returns the residue and the level where it
    /// dropped out (`levels.len()` when it passed every level).
    fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let gamma = g.apply(level.base_point);
            match &level.transversal[gamma as usize] {
                Some((_, inv)) => g = inv.compose(&g),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Strong generators, deduplicated, in level order.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, level) = self.sift_from(g.clone(), 0);
        level == self.levels.len() && residue.is_identity()
    }

    /// A uniformly distributed element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in &self.levels {
            let gamma = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.compose(&level.transversal[gamma as usize].as_ref().unwrap().0);
        }
        g
    }

    /// Every element, as products of transversal representatives.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for &gamma in &level.orbit {
                let u = &level.transversal[gamma as usize].as_ref().unwrap().0;
                for g in &out {
                    next.push(u.compose(g));
                }
            }
            out = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[u32]]) -> Permutation {
        let c: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(n, &c).unwrap()
    }

    #[test]
    fn symmetric_group_order() {
        let chain = StabChain::new(6, &[cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 1, 2, 3, 4, 5]])]);
        assert_eq!(chain.order(), BigUint::from(720u32));
        assert!(chain.contains(&cyc(6, &[&[2, 5]])));
    }

    #[test]
    fn trivial_and_membership() {
        let chain = StabChain::new(4, &[]);
        assert_eq!(chain.order(), BigUint::from(1u32));
        assert!(chain.contains(&Permutation::identity(4)));
        let a4 = StabChain::new(4, &[cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[1, 2, 3]])]);
        assert_eq!(a4.order(), BigUint::from(12u32));
        assert!(!a4.contains(&cyc(4, &[&[0, 1]])));
        assert!(a4.contains(&cyc(4, &[&[0, 1], &[2, 3]])));
    }

    #[test]
    fn enumerated_elements_are_distinct_members() {
        let chain = StabChain::new(5, &[cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[0, 1, 2]])]);
        let els = chain.elements();
        assert_eq!(els.len(), 60);
        let set: std::collections::HashSet<_> = els.iter().cloned().collect();
        assert_eq!(set.len(), 60);
        assert!(els.iter().all(|g| g.is_even()));
    }
}
