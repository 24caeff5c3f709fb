//! Degree-`d` fibers of `M ⊗ N` and the engines that count their classes.
//!
//! The degree-`d` piece of `M ⊗_R N` has one spanning vector per pair
//! `(x, y)` with `x ∈ E_M`, `y ∈ E_N`, `x + y = d`, modulo the relations
//! `(x, y) ~ (x − g, y + g)` for ring generators `g`. Its dimension is the
//! number of classes of that relation. Engines are interchangeable and
//! selected by name through [`EngineRegistry`].

use crate::error::{Error, Result};
use crate::ideal::SIdeal;
use crate::oracle::RankCounter;

/// Counts relation classes in a single fiber.
pub trait FiberCounter: Send + Sync {
    fn name(&self) -> &str;

    /// Number of classes in the degree-`degree` fiber of `m ⊗ n` under the
    /// relations generated by `ring_gens`. Callers have already checked that
    /// both ideals are closed under `ring_gens`.
    fn classes(&self, m: &SIdeal, n: &SIdeal, degree: i64, ring_gens: &[i64]) -> Result<usize>;
}

/// Disjoint-set forest with path compression and union by size.
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
            components: len,
        }
    }

    pub fn find(&mut self, id: usize) -> usize {
        let mut root = id;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = id;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        self.components -= 1;
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// Production engine: connected components of the fiber graph.
#[derive(Clone, Copy, Debug, Default)]
pub struct UnionFindCounter;

impl FiberCounter for UnionFindCounter {
    fn name(&self) -> &str {
        "union-find"
    }

    fn classes(&self, m: &SIdeal, n: &SIdeal, degree: i64, ring_gens: &[i64]) -> Result<usize> {
        let lo = m.min_element();
        let hi = degree - n.min_element();
        if hi < lo {
            return Ok(0);
        }
        // Node identity is x; y = degree − x.
        let width = (hi - lo + 1) as usize;
        let is_node: Vec<bool> = (lo..=hi)
            .map(|x| m.contains(x) && n.contains(degree - x))
            .collect();
        let mut uf = UnionFind::new(width);
        let mut absent = 0;
        for (i, &node) in is_node.iter().enumerate() {
            if !node {
                absent += 1;
                continue;
            }
            for &g in ring_gens {
                let j = i as i64 - g;
                if j >= 0 && is_node[j as usize] {
                    uf.union(i, j as usize);
                }
            }
        }
        Ok(uf.components() - absent)
    }
}

type Constructor = fn() -> Box<dyn FiberCounter>;

/// A named, described engine constructor.
pub struct EngineEntry {
    pub name: &'static str,
    pub description: &'static str,
    constructor: Constructor,
}

/// Name → engine table.
pub struct EngineRegistry {
    entries: Vec<EngineEntry>,
}

/// Engine used when none is requested.
pub const DEFAULT_ENGINE: &str = "union-find";

impl EngineRegistry {
    pub fn empty() -> Self {
        EngineRegistry {
            entries: Vec::new(),
        }
    }

    /// The union-find engine plus both linear-algebra oracles.
    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(
            "union-find",
            "connected components of the fiber graph",
            || Box::new(UnionFindCounter),
        );
        reg.register(
            "rank-modp",
            "nodes minus rank of the signed incidence matrix over GF(65521)",
            || Box::new(RankCounter::default_prime()),
        );
        reg.register(
            "rank-rational",
            "nodes minus rank of the signed incidence matrix over the rationals",
            || Box::new(RankCounter::rational()),
        );
        reg
    }

    /// Adds or replaces an engine.
    pub fn register(&mut self, name: &'static str, description: &'static str, constructor: Constructor) {
        self.entries.retain(|e| e.name != name);
        self.entries.push(EngineEntry {
            name,
            description,
            constructor,
        });
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name).collect()
    }

    pub fn entries(&self) -> &[EngineEntry] {
        &self.entries
    }

    pub fn create(&self, name: &str) -> Result<Box<dyn FiberCounter>> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .map(|e| (e.constructor)())
            .ok_or_else(|| Error::UnknownEngine(name.to_string()))
    }
}

impl Default for EngineRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::Semigroup;
    use std::sync::Arc;

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(5);
        uf.union(0, 1);
        uf.union(3, 4);
        uf.union(1, 0);
        assert_eq!(uf.components(), 3);
        assert_eq!(uf.find(0), uf.find(1));
        assert_ne!(uf.find(2), uf.find(3));
    }

    #[test]
    fn hand_listed_fibers() {
        let s = Arc::new(Semigroup::new(&[2, 3]).unwrap());
        let m = SIdeal::new(&s, &[0, 1]).unwrap();
        let uf = UnionFindCounter;
        assert_eq!(uf.classes(&m, &m, 2, &[2, 3]).unwrap(), 2);
        assert_eq!(uf.classes(&m, &m, 3, &[2, 3]).unwrap(), 1);
        assert_eq!(uf.classes(&m, &m, -1, &[2, 3]).unwrap(), 0);

        let t = Arc::new(Semigroup::new(&[4, 5, 6]).unwrap());
        let a = SIdeal::new(&t, &[0, 1]).unwrap();
        let b = SIdeal::new(&t, &[0, 2]).unwrap();
        assert_eq!(uf.classes(&a, &b, 7, &[4, 5, 6]).unwrap(), 1);
    }

    #[test]
    fn registry_lookup() {
        let reg = EngineRegistry::builtin();
        assert_eq!(reg.names(), vec!["union-find", "rank-modp", "rank-rational"]);
        assert_eq!(reg.create("rank-modp").unwrap().name(), "rank-modp");
        assert!(matches!(reg.create("nope"), Err(Error::UnknownEngine(_))));
        let mut reg = EngineRegistry::empty();
        reg.register("x", "first", || Box::new(UnionFindCounter));
        reg.register("x", "second", || Box::new(UnionFindCounter));
        assert_eq!(reg.entries().len(), 1);
        assert_eq!(reg.entries()[0].description, "second");
    }
}
