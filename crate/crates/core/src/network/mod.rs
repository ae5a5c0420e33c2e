//! Reaction networks over exact non-negative rational complexes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::species_set::SpeciesSet;

mod parse;
mod structure;

pub use parse::parse_network;
pub use structure::{ConservationLaw, Consistency};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Species {
    pub id: usize,
    pub name: String,
}

pub fn is_valid_species_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A non-negative combination of species. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Complex {
    coefficients: BTreeMap<usize, Rational>,
}

impl Complex {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Fails on a negative coefficient.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Result<Self> {
        let mut c = Self::zero();
        for (s, q) in pairs {
            if q.is_negative() {
                return Err(Error::Precondition(format!(
                    "negative coefficient for species {s}"
                )));
            }
            let entry = c.coefficients.entry(s).or_insert_with(Rational::zero);
            *entry += q;
        }
        c.coefficients.retain(|_, q| !q.is_zero());
        Ok(c)
    }

    pub fn from_dense(v: &[Rational]) -> Result<Self> {
        Self::from_pairs(v.iter().cloned().enumerate())
    }

    pub fn coefficient(&self, species: usize) -> Rational {
        self.coefficients
            .get(&species)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coefficients.iter().map(|(&s, q)| (s, q))
    }

    pub fn support(&self) -> Vec<usize> {
        self.coefficients.keys().copied().collect()
    }

    pub fn support_set(&self, universe: usize) -> SpeciesSet {
        SpeciesSet::from_indices(universe, self.coefficients.keys().copied())
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn to_dense(&self, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        for (&s, q) in &self.coefficients {
            v[s] = q.clone();
        }
        v
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.values().all(rational::is_integer)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_pairs(self.iter().map(|(s, q)| (s, q * k))).expect("non-negative scale")
    }

    /// Largest coefficient, zero for the empty complex.
    pub fn max_coefficient(&self) -> Rational {
        self.coefficients
            .values()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_pairs(self.iter().chain(other.iter()).map(|(s, q)| (s, q.clone())))
            .expect("sum of non-negative complexes")
    }

    /// `self - other`, or `None` if some coefficient would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut out = self.coefficients.clone();
        for (s, q) in other.iter() {
            let e = out.entry(s).or_insert_with(Rational::zero);
            *e -= q;
            if e.is_negative() {
                return None;
            }
        }
        out.retain(|_, q| !q.is_zero());
        Some(Self { coefficients: out })
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Self) -> Self {
        Self::from_pairs(self.iter().filter_map(|(s, q)| {
            let o = other.coefficient(s);
            (!o.is_zero()).then(|| (s, q.clone().min(o)))
        }))
        .expect("minimum of non-negative complexes")
    }

    /// Splits into integer floor and fractional remainder.
    pub fn split_fractional(&self) -> (Self, Self) {
        let whole = Self::from_pairs(self.iter().map(|(s, q)| (s, rational::floor(q))))
            .expect("floor of non-negative");
        let frac = self.checked_sub(&whole).expect("floor does not exceed value");
        (whole, frac)
    }

    pub fn largest_species(&self) -> Option<usize> {
        self.coefficients.keys().next_back().copied()
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_empty() {
            return "0".to_string();
        }
        self.coefficients
            .iter()
            .map(|(&s, q)| {
                if q == &Rational::from_integer(1.into()) {
                    names[s].clone()
                } else {
                    format!("{} {}", rational::render(q), names[s])
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.coefficients.iter().map(|(s, q)| (s, rational::render(q))))
            .finish()
    }
}

impl Serialize for Complex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, String> = self
            .coefficients
            .iter()
            .map(|(k, q)| (k.to_string(), rational::render(q)))
            .collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let m = BTreeMap::<String, String>::deserialize(d)?;
        let pairs = m
            .iter()
            .map(|(k, v)| {
                let s: usize = k.parse().map_err(D::Error::custom)?;
                let q = rational::parse_rational(v).map_err(D::Error::custom)?;
                Ok((s, q))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Complex::from_pairs(pairs).map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Reaction {
    pub reactant: Complex,
    pub product: Complex,
}

impl Reaction {
    pub fn new(reactant: Complex, product: Complex) -> Result<Self> {
        if reactant == product {
            return Err(Error::Precondition("reactant equals product".into()));
        }
        Ok(Self { reactant, product })
    }

    pub fn reversed(&self) -> Self {
        Self {
            reactant: self.product.clone(),
            product: self.reactant.clone(),
        }
    }

    /// `product - reactant` as a dense vector.
    pub fn vector(&self, n: usize) -> Vec<Rational> {
        let mut v = self.product.to_dense(n);
        for (s, q) in self.reactant.iter() {
            v[s] -= q;
        }
        v
    }

    pub fn render(&self, names: &[String]) -> String {
        format!("{} -> {}", self.reactant.render(names), self.product.render(names))
    }
}

/// An immutable reaction network. Species order is the matrix column order everywhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReactionNetwork {
    species: Vec<Species>,
    reactions: Vec<Reaction>,
}

impl ReactionNetwork {
    /// Validates names, indices, self-loops and duplicates.
    pub fn new(names: Vec<String>, reactions: Vec<Reaction>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !is_valid_species_name(n) {
                return Err(Error::Precondition(format!("invalid species name `{n}`")));
            }
            if seen.insert(n.as_str(), i).is_some() {
                return Err(Error::Precondition(format!("duplicate species `{n}`")));
            }
        }
        let mut distinct = std::collections::HashSet::new();
        for (k, r) in reactions.iter().enumerate() {
            let out_of_range = r
                .reactant
                .support()
                .into_iter()
                .chain(r.product.support())
                .any(|s| s >= names.len());
            if out_of_range {
                return Err(Error::Precondition(format!("reaction {k} uses an undeclared species")));
            }
            if r.reactant == r.product {
                return Err(Error::SelfLoop {
                    line: k + 1,
                    reaction: r.render(&names),
                });
            }
            if !distinct.insert(r.clone()) {
                return Err(Error::DuplicateReaction {
                    line: k + 1,
                    reaction: r.render(&names),
                });
            }
        }
        let species = names
            .into_iter()
            .enumerate()
            .map(|(id, name)| Species { id, name })
            .collect();
        Ok(Self { species, reactions })
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn species_names(&self) -> Vec<String> {
        self.species.iter().map(|s| s.name.clone()).collect()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    /// Parses a comma-separated list of species names, e.g. `"X,Y"`.
    pub fn species_set(&self, names: &str) -> Result<SpeciesSet> {
        let mut set = SpeciesSet::empty(self.num_species());
        for name in names.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let i = self
                .species_index(name)
                .ok_or_else(|| Error::UnknownSpecies(name.to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    pub fn set_names(&self, set: &SpeciesSet) -> Vec<String> {
        set.iter().map(|i| self.species[i].name.clone()).collect()
    }

    /// Parses a complex written in the `.crn` term syntax, e.g. `"2X + Y"` or `"0"`.
    pub fn parse_complex(&self, text: &str) -> Result<Complex> {
        parse::parse_complex_with(text, |name| self.species_index(name))
    }

    pub fn render_complex(&self, c: &Complex) -> String {
        c.render(&self.species_names())
    }

    pub fn check_set(&self, set: &SpeciesSet) -> Result<()> {
        if set.universe() == self.num_species() {
            Ok(())
        } else {
            Err(Error::ForeignSpeciesSet)
        }
    }

    /// Every reactant and product coefficient is a non-negative integer.
    pub fn is_chemical(&self) -> bool {
        self.reactions
            .iter()
            .all(|r| r.reactant.is_integral() && r.product.is_integral())
    }

    /// The reactions reversed, species unchanged.
    pub fn opposite_network(&self) -> Self {
        Self {
            species: self.species.clone(),
            reactions: self.reactions.iter().map(Reaction::reversed).collect(),
        }
    }

    /// The `.crn` text for this network; parsing it gives back an equal network.
    pub fn render(&self) -> String {
        let names = self.species_names();
        let mut out = String::new();
        if !names.is_empty() {
            out.push_str("species: ");
            out.push_str(&names.join(" "));
            out.push('\n');
        }
        for r in &self.reactions {
            out.push_str(&r.render(&names));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for ReactionNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
