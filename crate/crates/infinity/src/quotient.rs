//! The quotient apartment `A_J = A / V_J`, with `V_J` the common kernel of the
//! simple roots in `J`.

use crate::InfinityError;
use apartment::{ApartmentModel, ModelConfig};
use coxeter_core::linalg::dot;
use coxeter_core::rational::Q;
use coxeter_core::{CoxeterDatum, Matrix, Realization};

#[derive(Clone, Debug)]
pub struct QuotientApartment {
    j: Vec<usize>,
    /// Ambient coordinates spanning the chosen complement of `V_J`.
    complement: Vec<usize>,
    /// The roots of `J` as forms on the ambient space.
    roots: Vec<Vec<Q>>,
    /// Inverse of those roots restricted to the complement.
    solve: Matrix,
    model: ApartmentModel,
}

fn projector(roots: &[Vec<Q>], solve: &Matrix, x: &[Q]) -> Vec<Q> {
    let values: Vec<Q> = roots.iter().map(|r| dot(r, x)).collect();
    solve.apply(&values)
}

impl QuotientApartment {
    /// The complement is spanned by the pivot coordinates of the roots of `J`,
    /// taken in increasing order.
    pub fn new(model: &ApartmentModel, j: &[usize]) -> Result<Self, InfinityError> {
        let re = model.realization();
        let mut j = j.to_vec();
        j.sort_unstable();
        j.dedup();
        if j.is_empty() || j.iter().any(|&i| i >= re.rank()) {
            return Err(InfinityError::BadType(j));
        }
        let roots: Vec<Vec<Q>> = j.iter().map(|&i| re.root(i).to_vec()).collect();
        let restrict = |cols: &[usize]| -> Matrix {
            Matrix::from_rows(roots.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect())
        };
        let mut complement = Vec::new();
        for c in 0..re.dim() {
            if complement.len() == j.len() {
                break;
            }
            let mut trial = complement.clone();
            trial.push(c);
            if restrict(&trial).rank() == trial.len() {
                complement = trial;
            }
        }
        let solve = restrict(&complement).inverse().expect("simple roots are independent");
        let d = re.datum();
        let labels: Vec<String> = j.iter().map(|&i| d.labels()[i].clone()).collect();
        let coxeter = j.iter().map(|&a| j.iter().map(|&b| d.m(a, b)).collect()).collect();
        let cartan = j.iter().map(|&a| j.iter().map(|&b| d.a(a, b)).collect()).collect();
        let sub = CoxeterDatum::new(labels, coxeter, Some(cartan)).expect("sub-datum of a valid datum");
        let q_roots: Vec<Vec<Q>> = roots.iter().map(|r| complement.iter().map(|&c| r[c].clone()).collect()).collect();
        let q_coroots: Vec<Vec<Q>> = j.iter().map(|&i| projector(&roots, &solve, re.coroot(i))).collect();
        let q_re = Realization::custom(sub, q_roots, q_coroots).expect("pairings are inherited");
        let cfg = model.config();
        let q_cfg = ModelConfig {
            height: cfg.height,
            policy: cfg.policy,
            steps: j.iter().map(|&i| cfg.steps[i].clone()).collect(),
        };
        let model = ApartmentModel::new(q_re, q_cfg)?;
        Ok(QuotientApartment { j, complement, roots, solve, model })
    }

    pub fn j(&self) -> &[usize] {
        &self.j
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn model(&self) -> &ApartmentModel {
        &self.model
    }

    pub fn dim(&self) -> usize {
        self.j.len()
    }

    /// Projection along `V_J`, in coordinates of the complement.
    pub fn project(&self, x: &[Q]) -> Vec<Q> {
        projector(&self.roots, &self.solve, x)
    }

    /// `V_0` of the quotient is trivial.
    pub fn is_essential(&self) -> bool {
        let re = self.model.realization();
        Matrix::from_rows((0..re.rank()).map(|i| re.root(i).to_vec()).collect()).rank() == re.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coxeter_core::rational::{frac, int};

    fn model(name: &str) -> ApartmentModel {
        let re = Realization::new(CoxeterDatum::named(name).unwrap());
        ApartmentModel::new(re, ModelConfig::integral(CoxeterDatum::named(name).unwrap().rank()).with_height(4)).unwrap()
    }

    #[test]
    fn roots_of_j_survive_projection() {
        for (name, j) in [("A2", vec![0]), ("A1xA1", vec![1]), ("B2", vec![1]), ("~A2", vec![0, 2]), ("A3", vec![0, 2])] {
            let m = model(name);
            let q = QuotientApartment::new(&m, &j).unwrap();
            assert!(q.is_essential());
            assert_eq!(q.model().datum().rank(), j.len());
            let re = m.realization();
            let x: Vec<Q> = (0..re.dim()).map(|k| frac(2 * k as i64 - 3, 3)).collect();
            let y = q.project(&x);
            for (a, &i) in j.iter().enumerate() {
                assert_eq!(dot(q.model().realization().root(a), &y), re.eval_simple(i, &x));
                // cartan entries of the sub-datum
                for (b, &k) in j.iter().enumerate() {
                    assert_eq!(dot(q.model().realization().root(b), q.model().realization().coroot(a)), int(re.datum().a(i, k)));
                }
            }
            // V_J projects to 0
            for v in Matrix::from_rows(j.iter().map(|&i| re.root(i).to_vec()).collect()).null_space() {
                assert!(q.project(&v).iter().all(|c| c == &int(0)));
            }
        }
    }

    #[test]
    fn empty_type_is_rejected() {
        assert!(QuotientApartment::new(&model("A2"), &[]).is_err());
    }
}
