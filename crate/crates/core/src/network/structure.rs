use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use super::{Complex, ReactionNetwork};
use crate::feasibility::{solve_feasibility, FeasibilitySystem};
use crate::matrix::{self, RationalMatrix};
use crate::rational::{self, Rational};
use crate::species_set::SpeciesSet;

/// A vector over species perpendicular to every reaction vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConservationLaw {
    #[serde(with = "rational::serde_q::vec")]
    pub weights: Vec<Rational>,
    pub positive: bool,
}

impl ConservationLaw {
    pub fn new(weights: Vec<Rational>) -> Self {
        let positive = rational::all_nonneg(&weights) && !rational::all_zero(&weights);
        Self { weights, positive }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len())
            .filter(|&i| !self.weights[i].is_zero())
            .collect()
    }

    /// Exact check against the network's stoichiometric matrix.
    pub fn holds_for(&self, net: &ReactionNetwork) -> bool {
        self.weights.len() == net.num_species()
            && rational::all_zero(&net.stoichiometric_matrix().mul_vec(&self.weights))
            && (!self.positive
                || (rational::all_nonneg(&self.weights) && !rational::all_zero(&self.weights)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Consistency {
    /// `v` over reactions, every entry at least one, `v Γ = 0`.
    Consistent {
        #[serde(with = "rational::serde_q::vec")]
        v: Vec<Rational>,
    },
    /// `y` over species with `Γ y >= 0` and `Σ (Γ y) >= 1`; no strictly positive `v` can
    /// then satisfy `v Γ = 0`, since `v·(Γ y)` would be both zero and positive.
    Infeasible {
        #[serde(with = "rational::serde_q::vec")]
        refutation: Vec<Rational>,
    },
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent { .. })
    }

    pub fn verify(&self, net: &ReactionNetwork) -> bool {
        let gamma = net.stoichiometric_matrix();
        match self {
            Consistency::Consistent { v } => {
                v.len() == net.num_reactions()
                    && v.iter().all(|x| *x >= Rational::one())
                    && rational::all_zero(&gamma.left_mul(v))
            }
            Consistency::Infeasible { refutation } => {
                if refutation.len() != net.num_species() {
                    return false;
                }
                let g = gamma.mul_vec(refutation);
                rational::all_nonneg(&g) && g.iter().sum::<Rational>() >= Rational::one()
            }
        }
    }
}

impl ReactionNetwork {
    /// One row per reaction (input order), `product - reactant`, columns in species order.
    pub fn stoichiometric_matrix(&self) -> RationalMatrix {
        let n = self.num_species();
        let rows = self.reactions.iter().map(|r| r.vector(n)).collect();
        RationalMatrix::from_rows(rows, n).expect("reaction vectors have species length")
    }

    /// Basis of `{w : Γ w = 0}` in reduced echelon form.
    pub fn conservation_laws(&self) -> Vec<ConservationLaw> {
        let kernel = self.stoichiometric_matrix().kernel_basis();
        matrix::canonical_basis(&kernel, self.num_species())
            .into_iter()
            .map(ConservationLaw::new)
            .collect()
    }

    /// A positive conservation law supported inside `bound`, normalised to sum one.
    pub fn positive_conservation_law(&self, bound: &SpeciesSet) -> Option<ConservationLaw> {
        if bound.is_empty() || self.check_set(bound).is_err() {
            return None;
        }
        let n = self.num_species();
        let mut sys = FeasibilitySystem::new(n).all_nonneg().equal(
            (0..n)
                .map(|i| if bound.contains(i) { Rational::one() } else { Rational::zero() })
                .collect(),
            Rational::one(),
        );
        for i in (0..n).filter(|&i| !bound.contains(i)) {
            let mut row = vec![Rational::zero(); n];
            row[i] = Rational::one();
            sys = sys.equal(row, Rational::zero());
        }
        for row in self.stoichiometric_matrix().rows() {
            sys = sys.equal(row.clone(), Rational::zero());
        }
        solve_feasibility(&sys).point().map(ConservationLaw::new)
    }

    /// A conservation law with every weight at least one, if the network is conservative.
    pub fn conservative_law(&self) -> Option<ConservationLaw> {
        let n = self.num_species();
        let mut sys = FeasibilitySystem::new(n);
        for i in 0..n {
            let mut row = vec![Rational::zero(); n];
            row[i] = Rational::one();
            sys = sys.at_least(row, Rational::one());
        }
        for row in self.stoichiometric_matrix().rows() {
            sys = sys.equal(row.clone(), Rational::zero());
        }
        solve_feasibility(&sys).point().map(ConservationLaw::new)
    }

    /// The reaction set is closed under reversal.
    pub fn is_reversible(&self) -> bool {
        let set: HashSet<_> = self.reactions.iter().collect();
        self.reactions.iter().all(|r| set.contains(&r.reversed()))
    }

    /// Every reaction lies on a directed cycle of the complex graph, i.e. both endpoints share a
    /// strongly connected component.
    pub fn is_weakly_reversible(&self) -> bool {
        let mut graph = DiGraph::<(), ()>::new();
        let mut nodes: HashMap<&Complex, _> = HashMap::new();
        let mut node = |c, g: &mut DiGraph<(), ()>| *nodes.entry(c).or_insert_with(|| g.add_node(()));
        let edges: Vec<_> = self
            .reactions
            .iter()
            .map(|r| {
                let a = node(&r.reactant, &mut graph);
                let b = node(&r.product, &mut graph);
                (a, b)
            })
            .collect();
        for &(a, b) in &edges {
            graph.add_edge(a, b, ());
        }
        let mut component = vec![0; graph.node_count()];
        for (k, scc) in tarjan_scc(&graph).into_iter().enumerate() {
            for n in scc {
                component[n.index()] = k;
            }
        }
        edges
            .iter()
            .all(|(a, b)| component[a.index()] == component[b.index()])
    }

    /// Decides whether a strictly positive `v` with `v Γ = 0` exists, with a certificate either way.
    pub fn is_consistent(&self) -> Consistency {
        let gamma = self.stoichiometric_matrix();
        let r = self.num_reactions();
        let mut sys = FeasibilitySystem::new(r);
        for i in 0..r {
            let mut row = vec![Rational::zero(); r];
            row[i] = Rational::one();
            sys = sys.at_least(row, Rational::one());
        }
        for j in 0..self.num_species() {
            sys = sys.equal(gamma.column(j), Rational::zero());
        }
        if let Some(v) = solve_feasibility(&sys).point() {
            return Consistency::Consistent { v };
        }
        // Stiemke alternative: Γ y >= 0 with Γ y != 0.
        let n = self.num_species();
        let mut dual = FeasibilitySystem::new(n);
        for row in gamma.rows() {
            dual = dual.at_least(row.clone(), Rational::zero());
        }
        let total: Vec<Rational> = (0..n)
            .map(|j| gamma.column(j).iter().sum())
            .collect();
        dual = dual.at_least(total, Rational::one());
        let refutation = solve_feasibility(&dual)
            .point()
            .expect("Stiemke alternative must hold when no positive left kernel vector exists");
        Consistency::Infeasible { refutation }
    }

    pub fn is_conservative(&self) -> bool {
        self.conservative_law().is_some()
    }
}
