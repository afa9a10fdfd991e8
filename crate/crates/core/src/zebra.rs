//! Logic puzzles with `n` people and `m` attribute categories.
//!
//! Each rule says that one value of one category and one value of another
//! category belong to the same person. Chaining the rules groups values into
//! connected components; a component that spans the categories `C` is a
//! component `C` of a multiset, and a solution of the puzzle is a resolution
//! of that multiset. A puzzle built from a uniquely resolvable multiset of
//! size `|F|` therefore has a unique solution with `n m - |F|` rules.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constructions::{best_construction, ConstructedInstance};
use crate::error::{Error, Result};
use crate::mask::SubsetMask;
use crate::multiset::Multiset;

/// Largest `n` and `m` [`solve_puzzle`] accepts.
pub const MAX_SOLVE_N: usize = 8;
pub const MAX_SOLVE_M: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Category {
    pub name: String,
    pub values: Vec<String>,
}

/// "The person with `value_a` in `category_a` has `value_b` in `category_b`."
/// Categories and values are 0-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub cat_a: usize,
    pub val_a: usize,
    pub cat_b: usize,
    pub val_b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Puzzle {
    pub n: usize,
    pub m: usize,
    pub categories: Vec<Category>,
    pub rules: Vec<Rule>,
    pub seed: u64,
}

impl Puzzle {
    /// Checks shapes: `m` categories of `n` distinct values, rules in range and
    /// between different categories.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::Malformed("puzzle needs n, m >= 1".into()));
        }
        check_naming(&self.categories, self.n, self.m)?;
        for (i, r) in self.rules.iter().enumerate() {
            if r.cat_a >= self.m || r.cat_b >= self.m || r.val_a >= self.n || r.val_b >= self.n {
                return Err(Error::Malformed(format!(
                    "rule {i} refers to a missing category or value"
                )));
            }
            if r.cat_a == r.cat_b {
                return Err(Error::Malformed(format!("rule {i} relates a category to itself")));
            }
        }
        Ok(())
    }
}

fn check_naming(categories: &[Category], n: usize, m: usize) -> Result<()> {
    if categories.len() != m {
        return Err(Error::Malformed(format!(
            "expected {m} categories, got {}",
            categories.len()
        )));
    }
    for c in categories {
        if c.values.len() != n {
            return Err(Error::Malformed(format!(
                "category {:?} has {} values, expected {n}",
                c.name,
                c.values.len()
            )));
        }
        for (i, v) in c.values.iter().enumerate() {
            if c.values[..i].contains(v) {
                return Err(Error::Malformed(format!(
                    "value {v:?} repeated in category {:?}",
                    c.name
                )));
            }
        }
    }
    Ok(())
}

const CATEGORY_NAMES: [&str; 8] = [
    "Color", "Drink", "Pet", "Subject", "Sport", "Nation", "Food", "Music",
];

/// Categories `Color, Drink, Pet, ...` (then `Attr9, Attr10, ...`) with
/// values `Color1..Colorn` and so on.
pub fn default_naming(n: usize, m: usize) -> Vec<Category> {
    (0..m)
        .map(|c| {
            let name = match CATEGORY_NAMES.get(c) {
                Some(s) => String::from(*s),
                None => format!("Attr{}", c + 1),
            };
            let values = (1..=n).map(|v| format!("{name}{v}")).collect();
            Category { name, values }
        })
        .collect()
}

/// One seeded shuffle of `0..n` per category.
fn value_permutations(n: usize, m: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect()
}

/// Turns a resolved multiset into a puzzle.
///
/// Person `i` is class `i`; in category `c` that person gets value
/// `perm_c(i)` for a seeded permutation `perm_c`. Each component with
/// categories `c_1 < ... < c_s` contributes the path of `s - 1` rules
/// `(c_1, c_2), (c_2, c_3), ...`.
pub fn puzzle_from_multiset(inst: &ConstructedInstance, naming: Vec<Category>, seed: u64) -> Result<Puzzle> {
    let (n, m) = (inst.n(), inst.m());
    check_naming(&naming, n, m)?;
    let perms = value_permutations(n, m, seed);
    let mut rules = Vec::with_capacity(n * m - inst.size().min(n * m));
    for (person, class) in inst.partition.classes().iter().enumerate() {
        for &j in class {
            let cats: Vec<usize> = inst.ms.components()[j].elements().map(|e| e - 1).collect();
            for w in cats.windows(2) {
                rules.push(Rule {
                    cat_a: w[0],
                    val_a: perms[w[0]][person],
                    cat_b: w[1],
                    val_b: perms[w[1]][person],
                });
            }
        }
    }
    Ok(Puzzle {
        n,
        m,
        categories: naming,
        rules,
        seed,
    })
}

/// Union-find over the `n m` values; vertex `c n + v` is value `v` of
/// category `c`.
struct Groups {
    parent: Vec<usize>,
}

impl Groups {
    fn new(size: usize) -> Self {
        Self {
            parent: (0..size).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller vertex as root so component order is stable.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Value groups forced together by the rules, ordered by smallest vertex.
/// Each group is a list of `(category, value)`; a group holding two values of
/// one category is a contradiction.
fn rule_groups(pz: &Puzzle) -> Result<Vec<Vec<(usize, usize)>>> {
    pz.validate()?;
    let n = pz.n;
    let mut g = Groups::new(n * pz.m);
    for r in &pz.rules {
        g.union(r.cat_a * n + r.val_a, r.cat_b * n + r.val_b);
    }
    let mut slot = vec![usize::MAX; n * pz.m];
    let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
    for v in 0..n * pz.m {
        let root = g.find(v);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        let group = &mut groups[slot[root]];
        let (c, val) = (v / n, v % n);
        if let Some(&(_, other)) = group.iter().find(|(gc, _)| *gc == c) {
            return Err(Error::Inconsistent(format!(
                "{} and {} of category {} must belong to the same person",
                pz.categories[c].values[other], pz.categories[c].values[val], pz.categories[c].name
            )));
        }
        group.push((c, val));
    }
    Ok(groups)
}

/// The multiset of category sets spanned by the rule graph's components.
pub fn puzzle_to_multiset(pz: &Puzzle) -> Result<Multiset> {
    let groups = rule_groups(pz)?;
    let comps = groups
        .iter()
        .map(|g| SubsetMask::new(g.iter().fold(0u32, |acc, (c, _)| acc | (1 << c)), pz.m))
        .collect::<Result<Vec<_>>>()?;
    Multiset::new(pz.m, comps)
}

/// `assignment[c][person]` is the value index of `person` in category `c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PuzzleSolution {
    pub assignment: Vec<Vec<usize>>,
}

impl PuzzleSolution {
    pub fn satisfies(&self, pz: &Puzzle) -> bool {
        let bijective = self.assignment.iter().all(|row| {
            let mut seen = vec![false; pz.n];
            row.len() == pz.n
                && row
                    .iter()
                    .all(|&v| v < pz.n && !core::mem::replace(&mut seen[v], true))
        });
        bijective
            && self.assignment.len() == pz.m
            && pz.rules.iter().all(|r| {
                let pa = self.assignment[r.cat_a].iter().position(|&v| v == r.val_a);
                let pb = self.assignment[r.cat_b].iter().position(|&v| v == r.val_b);
                pa == pb
            })
    }
}

/// Up to `limit` solutions, people named by their value in the first
/// category (person `i` has value `i` there), so renaming people does not
/// produce new solutions.
///
/// Backtracks over the rule groups, largest first, placing each on a person
/// who has none of its categories yet.
pub fn solve_puzzle(pz: &Puzzle, limit: usize) -> Result<Vec<PuzzleSolution>> {
    if pz.n > MAX_SOLVE_N || pz.m > MAX_SOLVE_M {
        return Err(Error::Capacity(format!(
            "solver handles n, m <= {MAX_SOLVE_N}, got n = {}, m = {}",
            pz.n, pz.m
        )));
    }
    let groups = rule_groups(pz)?;
    let n = pz.n;
    let mut solver = Solver {
        n,
        taken: vec![0u32; n],
        assignment: vec![vec![usize::MAX; n]; pz.m],
        out: Vec::new(),
        limit,
        order: Vec::new(),
        groups: &groups,
    };
    // Groups holding a first-category value are pinned to that person.
    let mut free = Vec::new();
    for (gi, g) in groups.iter().enumerate() {
        match g.iter().find(|(c, _)| *c == 0) {
            Some(&(_, person)) => solver.place(gi, person),
            None => free.push(gi),
        }
    }
    free.sort_by_key(|&gi| core::cmp::Reverse(groups[gi].len()));
    solver.order = free;
    if limit > 0 {
        solver.search(0);
    }
    Ok(solver.out)
}

struct Solver<'a> {
    n: usize,
    taken: Vec<u32>,
    assignment: Vec<Vec<usize>>,
    out: Vec<PuzzleSolution>,
    limit: usize,
    order: Vec<usize>,
    groups: &'a [Vec<(usize, usize)>],
}

impl Solver<'_> {
    fn cats(&self, gi: usize) -> u32 {
        self.groups[gi].iter().fold(0, |acc, (c, _)| acc | (1 << c))
    }

    fn place(&mut self, gi: usize, person: usize) {
        self.taken[person] |= self.cats(gi);
        for &(c, v) in &self.groups[gi] {
            self.assignment[c][person] = v;
        }
    }

    fn unplace(&mut self, gi: usize, person: usize) {
        self.taken[person] &= !self.cats(gi);
        for &(c, _) in &self.groups[gi] {
            self.assignment[c][person] = usize::MAX;
        }
    }

    fn search(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.out.push(PuzzleSolution {
                assignment: self.assignment.clone(),
            });
            return;
        }
        let gi = self.order[depth];
        let cats = self.cats(gi);
        for person in 0..self.n {
            if self.taken[person] & cats != 0 {
                continue;
            }
            self.place(gi, person);
            self.search(depth + 1);
            self.unplace(gi, person);
            if self.out.len() >= self.limit {
                return;
            }
        }
    }
}

/// A puzzle with the fewest rules our constructions achieve:
/// `n m - |best_construction(n, m)|`.
pub fn generate_minimal_puzzle(n: usize, m: usize, seed: u64) -> Result<Puzzle> {
    let inst = best_construction(n, m)?;
    puzzle_from_multiset(&inst, default_naming(n, m), seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{trivial_construction, ConstructedInstance, Provenance};
    use crate::multiset::Partition;

    fn figure1_instance() -> ConstructedInstance {
        let ms = Multiset::from_elements(5, &[&[1, 2][..], &[3, 4, 5], &[1], &[2, 3], &[4], &[5]]).unwrap();
        ConstructedInstance::new(
            ms,
            Partition::new(vec![vec![0, 1], vec![2, 3, 4, 5]]),
            Provenance::Search,
        )
        .unwrap()
    }

    pub(crate) fn figure1_puzzle() -> Puzzle {
        let cat = |name: &str, a: &str, b: &str| Category {
            name: name.into(),
            values: vec![a.into(), b.into()],
        };
        let categories = vec![
            cat("Color", "Red", "Blue"),
            cat("Drink", "Coffee", "Tea"),
            cat("Pet", "Dog", "Cat"),
            cat("Subject", "Math", "CS"),
            cat("Sport", "Tennis", "Chess"),
        ];
        let rule = |cat_a, val_a, cat_b, val_b| Rule {
            cat_a,
            val_a,
            cat_b,
            val_b,
        };
        // (Red,Coffee), (Dog,Math), (Tennis,Dog), (Tea,Cat)
        let rules = vec![
            rule(0, 0, 1, 0),
            rule(2, 0, 3, 0),
            rule(4, 0, 2, 0),
            rule(1, 1, 2, 1),
        ];
        Puzzle {
            n: 2,
            m: 5,
            categories,
            rules,
            seed: 0,
        }
    }

    #[test]
    fn figure1_rules_give_figure1_multiset() {
        let ms = puzzle_to_multiset(&figure1_puzzle()).unwrap();
        assert_eq!(ms.sorted_masks(), figure1_instance().ms.sorted_masks());
    }

    #[test]
    fn figure1_has_one_solution() {
        let pz = figure1_puzzle();
        let sols = solve_puzzle(&pz, 10).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sols[0].satisfies(&pz));
        // person 0 is Red: Coffee, Dog, Math, Tennis
        assert_eq!(
            sols[0].assignment.iter().map(|row| row[0]).collect::<Vec<_>>(),
            [0, 0, 0, 0, 0]
        );
    }

    #[test]
    fn figure1_instance_gives_four_rules() {
        let inst = figure1_instance();
        let pz = puzzle_from_multiset(&inst, default_naming(2, 5), 3).unwrap();
        assert_eq!(pz.rules.len(), 4);
        assert_eq!(
            puzzle_to_multiset(&pz).unwrap().sorted_masks(),
            inst.ms.sorted_masks()
        );
        assert_eq!(solve_puzzle(&pz, 5).unwrap().len(), 1);
    }

    #[test]
    fn trivial_instance_rule_count() {
        for (n, m) in [(1, 1), (2, 3), (3, 4)] {
            let pz =
                puzzle_from_multiset(&trivial_construction(n, m).unwrap(), default_naming(n, m), 1).unwrap();
            assert_eq!(pz.rules.len(), n * (m - 1));
        }
    }

    #[test]
    fn zero_rules_many_solutions() {
        let pz = Puzzle {
            n: 3,
            m: 3,
            categories: default_naming(3, 3),
            rules: vec![],
            seed: 0,
        };
        assert_eq!(puzzle_to_multiset(&pz).unwrap().len(), 9);
        assert_eq!(solve_puzzle(&pz, 100).unwrap().len(), 36);
        assert_eq!(solve_puzzle(&pz, 2).unwrap().len(), 2);
    }

    #[test]
    fn figure3_puzzle_is_ambiguous() {
        let ms = Multiset::from_elements(
            5,
            &[
                &[1, 2][..],
                &[3, 4],
                &[5],
                &[1, 4],
                &[3, 5],
                &[2],
                &[1, 5],
                &[2, 3],
                &[4],
            ],
        )
        .unwrap();
        let inst = ConstructedInstance::new(
            ms,
            Partition::new(vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]),
            Provenance::Search,
        )
        .unwrap();
        let pz = puzzle_from_multiset(&inst, default_naming(3, 5), 9).unwrap();
        assert!(solve_puzzle(&pz, 10).unwrap().len() >= 2);
    }

    #[test]
    fn generated_puzzles() {
        for (n, m, rules) in [(2, 5, 4), (2, 2, 1), (5, 4, 9)] {
            let pz = generate_minimal_puzzle(n, m, 42).unwrap();
            assert_eq!(pz.rules.len(), rules);
            assert_eq!(solve_puzzle(&pz, 2).unwrap().len(), 1);
            assert_eq!(pz, generate_minimal_puzzle(n, m, 42).unwrap());
        }
    }

    #[test]
    fn contradictions_and_shapes() {
        let mut pz = figure1_puzzle();
        // Red with Coffee and Red with Tea.
        pz.rules.push(Rule {
            cat_a: 0,
            val_a: 0,
            cat_b: 1,
            val_b: 1,
        });
        assert!(matches!(puzzle_to_multiset(&pz), Err(Error::Inconsistent(_))));
        assert!(matches!(solve_puzzle(&pz, 2), Err(Error::Inconsistent(_))));

        let mut pz = figure1_puzzle();
        pz.rules.push(Rule {
            cat_a: 1,
            val_a: 0,
            cat_b: 1,
            val_b: 1,
        });
        assert!(matches!(pz.validate(), Err(Error::Malformed(_))));

        let inst = figure1_instance();
        assert!(matches!(
            puzzle_from_multiset(&inst, default_naming(3, 5), 0),
            Err(Error::Malformed(_))
        ));

        let big = Puzzle {
            n: 9,
            m: 2,
            categories: default_naming(9, 2),
            rules: vec![],
            seed: 0,
        };
        assert!(matches!(solve_puzzle(&big, 1), Err(Error::Capacity(_))));
    }

    #[test]
    fn default_names() {
        let names = default_naming(2, 10);
        assert_eq!(names[0].values, ["Color1", "Color2"]);
        assert_eq!(names[9].name, "Attr10");
    }
}
