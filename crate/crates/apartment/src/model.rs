use coxeter_core::rational::{int, Q};
use coxeter_core::roots::{imaginary_roots_up_to_height, pair_with_coroot, reflect_coeffs, roots_up_to_height};
use coxeter_core::{GroupElement, ImaginaryPolicy, Realization};
use num_traits::Signed;
use petgraph::unionfind::UnionFind;
use std::collections::HashMap;
use thiserror::Error;
use tits_cone::TitsCone;

pub const DEFAULT_HEIGHT: i64 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApartmentError {
    #[error("value group of generator {0} is dense; only d·Z is supported")]
    DenseValueGroup(usize),
    #[error("value group step of generator {0} must be positive")]
    NonPositiveStep(usize),
    #[error("expected {expected} value group steps, got {got}")]
    StepCount { expected: usize, got: usize },
    #[error("generators {0} and {1} are W-conjugate but have different value groups")]
    NotConstantOnOrbit(usize, usize),
    #[error("translation by d_{i}·coroot_{i} moves walls of root {root:?} off the value group")]
    Incompatible { i: usize, root: Vec<i64> },
    #[error("height truncation must be at least 1")]
    Height,
    #[error("enclosure of an empty set")]
    EmptyInput,
    #[error("vector has dimension {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("shortening vector is not in the closed direction facet")]
    NotInDirection,
    #[error("sphericity of the support fixator is undecided")]
    Undecided,
}

/// Value groups and truncation for a model apartment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelConfig {
    pub height: i64,
    pub policy: ImaginaryPolicy,
    /// `Some(d)` for `Γ = d·Z`, `None` for a dense group, per generator.
    pub steps: Vec<Option<Q>>,
}

impl ModelConfig {
    pub fn integral(rank: usize) -> Self {
        ModelConfig { height: DEFAULT_HEIGHT, policy: ImaginaryPolicy::Tame, steps: vec![Some(int(1)); rank] }
    }

    pub fn with_height(mut self, height: i64) -> Self {
        self.height = height;
        self
    }

    pub fn with_policy(mut self, policy: ImaginaryPolicy) -> Self {
        self.policy = policy;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelRoot {
    pub coeffs: Vec<i64>,
    pub form: Vec<Q>,
    /// `Some(orbit)` for real roots, `None` for imaginary ones.
    pub orbit: Option<usize>,
}

impl ModelRoot {
    pub fn is_real(&self) -> bool {
        self.orbit.is_some()
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }
}

/// The model apartment: a realization, value groups `Γ_α = d·Z` constant on
/// `W`-orbits of real roots, and the working root set `Δ_H`.
#[derive(Debug, Clone)]
pub struct ApartmentModel {
    cone: TitsCone,
    config: ModelConfig,
    orbit_steps: Vec<Q>,
    simple_orbit: Vec<usize>,
    roots: Vec<ModelRoot>,
    index: HashMap<Vec<i64>, usize>,
}

impl ApartmentModel {
    pub fn new(re: Realization, config: ModelConfig) -> Result<Self, ApartmentError> {
        let d = re.datum().clone();
        let n = d.rank();
        if config.steps.len() != n {
            return Err(ApartmentError::StepCount { expected: n, got: config.steps.len() });
        }
        if config.height < 1 {
            return Err(ApartmentError::Height);
        }
        let mut steps = Vec::with_capacity(n);
        for (i, s) in config.steps.iter().enumerate() {
            match s {
                None => return Err(ApartmentError::DenseValueGroup(i)),
                Some(q) if !q.is_positive() => return Err(ApartmentError::NonPositiveStep(i)),
                Some(q) => steps.push(q.clone()),
            }
        }
        // α_i and α_j are conjugate when m(i,j) is odd
        let mut uf = UnionFind::<usize>::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if d.m(i, j).is_some_and(|m| m % 2 == 1) {
                    uf.union(i, j);
                }
            }
        }
        let labels = uf.into_labeling();
        let mut reps: Vec<usize> = Vec::new();
        let mut simple_orbit = vec![0; n];
        for i in 0..n {
            let pos = match reps.iter().position(|&r| labels[r] == labels[i]) {
                Some(p) => {
                    if steps[reps[p]] != steps[i] {
                        return Err(ApartmentError::NotConstantOnOrbit(reps[p], i));
                    }
                    p
                }
                None => {
                    reps.push(i);
                    reps.len() - 1
                }
            };
            simple_orbit[i] = pos;
        }
        let orbit_steps: Vec<Q> = reps.iter().map(|&r| steps[r].clone()).collect();
        let mut roots = Vec::new();
        for r in roots_up_to_height(&d, config.height) {
            let orbit = simple_orbit[descend_to_simple(&d, &r.coeffs)];
            roots.push(ModelRoot { form: re.root_form(&r.coeffs), coeffs: r.coeffs, orbit: Some(orbit) });
        }
        if config.policy == ImaginaryPolicy::Tame {
            for c in imaginary_roots_up_to_height(&d, config.height) {
                roots.push(ModelRoot { form: re.root_form(&c), coeffs: c, orbit: None });
            }
        }
        let index = roots.iter().enumerate().map(|(k, r)| (r.coeffs.clone(), k)).collect();
        let model = ApartmentModel { cone: TitsCone::new(re), config, orbit_steps, simple_orbit, roots, index };
        model.check_translations()?;
        Ok(model)
    }

    pub fn integral(re: Realization) -> Self {
        let n = re.rank();
        Self::new(re, ModelConfig::integral(n)).expect("Z value groups are always compatible")
    }

    /// `d_i β(α_i∨) ∈ Γ_β` for all real `β ∈ Δ_H`, so translations by
    /// `Γ_{α_i} α_i∨` permute walls.
    fn check_translations(&self) -> Result<(), ApartmentError> {
        let d = self.datum();
        for i in 0..d.rank() {
            let di = &self.orbit_steps[self.simple_orbit[i]];
            for r in self.roots.iter().filter(|r| r.is_real()) {
                let shift = di * int(pair_with_coroot(d, i, &r.coeffs));
                if !coxeter_core::rational::is_multiple(&shift, &self.orbit_steps[r.orbit.unwrap()]) {
                    return Err(ApartmentError::Incompatible { i, root: r.coeffs.clone() });
                }
            }
        }
        Ok(())
    }

    pub fn realization(&self) -> &Realization {
        self.cone.realization()
    }

    pub fn datum(&self) -> &coxeter_core::CoxeterDatum {
        self.cone.realization().datum()
    }

    pub fn cone(&self) -> &TitsCone {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.realization().dim()
    }

    pub fn height(&self) -> i64 {
        self.config.height
    }

    pub fn policy(&self) -> ImaginaryPolicy {
        self.config.policy
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn roots(&self) -> &[ModelRoot] {
        &self.roots
    }

    pub fn root_index(&self, coeffs: &[i64]) -> Option<usize> {
        self.index.get(coeffs).copied()
    }

    /// `d` with `Γ_α = d·Z`, or `None` for imaginary roots.
    pub fn step(&self, root: usize) -> Option<&Q> {
        self.roots[root].orbit.map(|o| &self.orbit_steps[o])
    }

    pub fn simple_step(&self, i: usize) -> &Q {
        &self.orbit_steps[self.simple_orbit[i]]
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_steps.len()
    }

    pub fn eval(&self, root: usize, x: &[Q]) -> Q {
        coxeter_core::linalg::dot(&self.roots[root].form, x)
    }

    pub fn check_dim(&self, x: &[Q]) -> Result<(), ApartmentError> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(ApartmentError::Dimension { expected: self.dim(), got: x.len() })
        }
    }

    /// Image of a root under `w`, if it is in `Δ_H`.
    pub fn map_root(&self, w: &GroupElement, root: usize) -> Option<usize> {
        self.root_index(&w.apply_root(&self.roots[root].coeffs))
    }
}

/// Index of a simple root conjugate to the real root `c`.
fn descend_to_simple(d: &coxeter_core::CoxeterDatum, c: &[i64]) -> usize {
    let mut c: Vec<i64> = if c.iter().all(|&x| x >= 0) { c.to_vec() } else { c.iter().map(|x| -x).collect() };
    loop {
        if let Some(i) = (coxeter_core::RealRoot { coeffs: c.clone() }).as_simple() {
            return i;
        }
        let i = (0..c.len())
            .find(|&i| pair_with_coroot(d, i, &c) > 0)
            .expect("a positive non-simple real root has an ascent");
        c = reflect_coeffs(d, i, &c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coxeter_core::rational::frac;
    use coxeter_core::CoxeterDatum;

    fn re(name: &str) -> Realization {
        Realization::new(CoxeterDatum::named(name).unwrap())
    }

    #[test]
    fn orbits_follow_odd_bonds() {
        let m = ApartmentModel::integral(re("A3"));
        assert_eq!(m.orbit_count(), 1);
        let m = ApartmentModel::integral(re("B2"));
        assert_eq!(m.orbit_count(), 2);
        let m = ApartmentModel::integral(re("A1xA1"));
        assert_eq!(m.orbit_count(), 2);
    }

    #[test]
    fn rejects_dense_and_inconsistent_groups() {
        let cfg = ModelConfig { height: 4, policy: ImaginaryPolicy::None, steps: vec![None, Some(int(1))] };
        assert_eq!(ApartmentModel::new(re("A2"), cfg).unwrap_err(), ApartmentError::DenseValueGroup(0));
        let cfg = ModelConfig { height: 4, policy: ImaginaryPolicy::None, steps: vec![Some(int(1)), Some(int(2))] };
        assert_eq!(ApartmentModel::new(re("A2"), cfg).unwrap_err(), ApartmentError::NotConstantOnOrbit(0, 1));
        // B2 with the long and short orbits scaled independently
        let cfg = ModelConfig { height: 4, policy: ImaginaryPolicy::None, steps: vec![Some(int(1)), Some(frac(1, 3))] };
        assert!(matches!(ApartmentModel::new(re("B2"), cfg), Err(ApartmentError::Incompatible { .. })));
        let cfg = ModelConfig { height: 4, policy: ImaginaryPolicy::None, steps: vec![Some(int(2)), Some(int(1))] };
        assert!(ApartmentModel::new(re("B2"), cfg).is_ok());
    }

    #[test]
    fn imaginary_roots_follow_policy() {
        let tame = ApartmentModel::integral(re("~A1"));
        assert!(tame.roots().iter().any(|r| !r.is_real()));
        assert_eq!(tame.step(tame.root_index(&[1, 1]).unwrap()), None);
        let cfg = ModelConfig::integral(2).with_policy(ImaginaryPolicy::None);
        let none = ApartmentModel::new(re("~A1"), cfg).unwrap();
        assert!(none.roots().iter().all(ModelRoot::is_real));
    }
}
