//! Conjugacy classes, centers and centralizer orders.

use super::finite::FiniteGroup;

/// Partition of a group into conjugacy classes.
///
/// Classes are numbered by their smallest element index, so class 0 is
/// `{identity}` and each representative is the first member found.
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    class_of: Vec<u32>,
    representatives: Vec<usize>,
    members: Vec<Vec<u32>>,
    order: usize,
}

impl ConjugacyClasses {
    /// Orbits of the conjugation action `x -> s^-1 x s` over the generators.
    pub fn compute(group: &FiniteGroup) -> Self {
        let n = group.order();
        let gens: Vec<(usize, usize)> = group
            .generators()
            .iter()
            .map(|&s| (s, group.inverse(s)))
            .collect();
        let mut class_of = vec![u32::MAX; n];
        let mut representatives = Vec::new();
        let mut members: Vec<Vec<u32>> = Vec::new();
        for start in 0..n {
            if class_of[start] != u32::MAX {
                continue;
            }
            let c = representatives.len() as u32;
            representatives.push(start);
            class_of[start] = c;
            let mut orbit = vec![start as u32];
            let mut head = 0;
            while head < orbit.len() {
                let x = orbit[head] as usize;
                for &(s, s_inv) in &gens {
                    let y = group.mul(s_inv, group.mul(x, s));
                    if class_of[y] == u32::MAX {
                        class_of[y] = c;
                        orbit.push(y as u32);
                    }
                }
                head += 1;
            }
            orbit.sort_unstable();
            members.push(orbit);
        }
        ConjugacyClasses { class_of, representatives, members, order: n }
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    #[inline]
    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element] as usize
    }

    pub fn class_ids(&self) -> &[u32] {
        &self.class_of
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn representative(&self, class: usize) -> usize {
        self.representatives[class]
    }

    pub fn size(&self, class: usize) -> usize {
        self.members[class].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    pub fn members(&self, class: usize) -> &[u32] {
        &self.members[class]
    }

    /// `|C_G(g)| = |G| / |class(g)|`.
    pub fn centralizer_order(&self, element: usize) -> usize {
        self.order / self.size(self.class_of(element))
    }

    /// Elements forming singleton classes, ascending.
    pub fn center(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| self.size(c) == 1)
            .map(|c| self.representatives[c])
            .collect()
    }

    pub fn is_central(&self, element: usize) -> bool {
        self.size(self.class_of(element)) == 1
    }

    /// Class containing the inverses of the members of `class`.
    pub fn inverse_class(&self, group: &FiniteGroup, class: usize) -> usize {
        self.class_of(group.inverse(self.representatives[class]))
    }

    /// Element order of each class representative.
    pub fn orders(&self, group: &FiniteGroup) -> Vec<u64> {
        self.representatives.iter().map(|&r| group.order_of_index(r)).collect()
    }
}

/// Least common multiple of all element orders.
pub fn exponent(orders: &[u64]) -> u64 {
    orders.iter().fold(1u64, |acc, &k| num_integer::lcm(acc, k))
}
