//! The aggregate invariant record. Field names are the JSON keys.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::charclasses::{is_orientable, is_spin, total_sw};
use crate::cohomology::{CohomologyRing, Monomial};
use crate::digraph::{build_digraph, to_dot};
use crate::error::{Error, Result};
use crate::fan::build_fan;
use crate::fungroup::{format_homotopy, h1, higher_homotopy, presentation, AbelianInvariants, Presentation};
use crate::model::VectorMatrix;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReportOptions {
    pub dot: bool,
    pub homotopy: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSummary {
    pub rays: Vec<Vec<i64>>,
    pub flag: bool,
    pub smooth: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub valid: bool,
    pub dims: Vec<usize>,
    /// Original block index placed at each position of the normal form.
    pub permutation: Vec<usize>,
    pub normalized_dims: Vec<usize>,
    pub normalized_rows: Vec<Vec<u8>>,
    pub remark_l_ordering: bool,
    pub orientable: bool,
    /// `None` exactly when the manifold is not orientable.
    pub spin: Option<bool>,
    pub w1: Vec<Monomial>,
    pub w2: Vec<Monomial>,
    /// Monomials of `w_d` for `d = 0..=n`.
    pub total_sw: Vec<Vec<Monomial>>,
    pub betti: Vec<usize>,
    pub pi1: Presentation,
    pub h1: AbelianInvariants,
    pub fan: FanSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digraph_dot: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub higher_homotopy: Option<String>,
}

impl Report {
    /// Validates and normalizes `a`, then computes every invariant on the
    /// normal form.
    pub fn build(a: &VectorMatrix, options: &ReportOptions) -> Result<Report> {
        if let Some(failure) = a.first_failing_minor() {
            return Err(Error::Inadmissible(failure.to_string()));
        }
        let (perm, b) = a.normalize()?;
        let ring = CohomologyRing::new(&b)?;
        let sw = total_sw(&ring)?;
        let orientable = is_orientable(&b);
        let spin = if orientable { Some(is_spin(&b)?) } else { None };
        let fan = build_fan(&b)?;
        let higher = options
            .homotopy
            .map(|j| higher_homotopy(b.dims(), j).map(|f| format_homotopy(&f)))
            .transpose()?;
        let dot = if options.dot {
            Some(to_dot(&build_digraph(&b)?))
        } else {
            None
        };
        Ok(Report {
            valid: true,
            dims: a.dims().as_slice().to_vec(),
            permutation: perm.order().to_vec(),
            normalized_dims: b.dims().as_slice().to_vec(),
            normalized_rows: b.rows_u8(),
            remark_l_ordering: b.remark_l_order().is_some(),
            orientable,
            spin,
            w1: ring.monomials(sw.component(1)),
            w2: if b.n() >= 2 {
                ring.monomials(sw.component(2))
            } else {
                Vec::new()
            },
            total_sw: sw.components().iter().map(|c| ring.monomials(c)).collect(),
            betti: ring.poincare_polynomial(),
            pi1: presentation(&b)?,
            h1: h1(&b)?,
            fan: FanSummary {
                rays: fan.rays().to_vec(),
                flag: fan.is_flag(),
                smooth: fan.is_smooth(),
            },
            digraph_dot: dot,
            higher_homotopy: higher,
        })
    }
}

fn monomial_list(ms: &[Monomial]) -> String {
    if ms.is_empty() {
        "0".to_string()
    } else {
        ms.iter().rev().map(ToString::to_string).collect::<Vec<_>>().join(" + ")
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims = |d: &[usize]| {
            d.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        };
        writeln!(f, "dims            ({})", dims(&self.dims))?;
        writeln!(
            f,
            "normal form     dims ({}), block order {:?}",
            dims(&self.normalized_dims),
            self.permutation.iter().map(|i| i + 1).collect::<Vec<_>>()
        )?;
        for row in &self.normalized_rows {
            let bits: String = row.iter().map(|b| char::from(b'0' + b)).collect();
            writeln!(f, "                {bits}")?;
        }
        writeln!(f, "large-first     {}", yes_no(self.remark_l_ordering))?;
        writeln!(f, "orientable      {}", yes_no(self.orientable))?;
        match self.spin {
            Some(s) => writeln!(f, "spin            {}", yes_no(s))?,
            None => writeln!(f, "spin            n/a")?,
        }
        writeln!(f, "w1              {}", monomial_list(&self.w1))?;
        writeln!(f, "w2              {}", monomial_list(&self.w2))?;
        let total: Vec<Monomial> = self.total_sw.iter().flatten().cloned().collect();
        writeln!(f, "w               {}", monomial_list(&total))?;
        writeln!(f, "betti (mod 2)   {:?}", self.betti)?;
        let rels: Vec<String> = self
            .pi1
            .relators
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&g| {
                        if g > 0 {
                            format!("a{g}")
                        } else {
                            format!("a{}^-1", -g)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        writeln!(
            f,
            "pi1             {} generators; relators: {}",
            self.pi1.generators,
            if rels.is_empty() { "none".to_string() } else { rels.join(", ") }
        )?;
        let fl = &self.pi1.flags;
        writeln!(
            f,
            "pi1 flags       abelian {}, nilpotent {}, solvable {}, torsion-free {}, aspherical {}",
            yes_no(fl.abelian),
            yes_no(fl.nilpotent),
            yes_no(fl.solvable),
            yes_no(fl.torsion_free),
            yes_no(fl.aspherical)
        )?;
        writeln!(f, "H1              {}", self.h1)?;
        writeln!(
            f,
            "fan             {} rays, smooth {}, flag {}",
            self.fan.rays.len(),
            yes_no(self.fan.smooth),
            yes_no(self.fan.flag)
        )?;
        if let Some(h) = &self.higher_homotopy {
            writeln!(f, "pi_j            {h}")?;
        }
        if let Some(dot) = &self.digraph_dot {
            write!(f, "{dot}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DimensionVector;

    fn mat(d: &[usize], rows: &[&[u8]]) -> VectorMatrix {
        let rows: Vec<Vec<u8>> = rows.iter().map(|r| r.to_vec()).collect();
        VectorMatrix::new(DimensionVector::new(d.to_vec()).unwrap(), &rows).unwrap()
    }

    #[test]
    fn example_one() {
        let r = Report::build(&mat(&[2, 1], &[&[1, 1, 1], &[0, 0, 1]]), &ReportOptions::default())
            .unwrap();
        assert!(r.orientable);
        assert_eq!(r.spin, Some(true));
        assert!(r.w1.is_empty() && r.w2.is_empty());
        assert_eq!(r.betti, vec![1, 2, 2, 1]);
        assert_eq!((r.h1.free_rank, r.h1.torsion.clone()), (0, vec![2, 2]));
        assert!(r.fan.smooth && !r.fan.flag);
    }

    #[test]
    fn torus() {
        let r = Report::build(&mat(&[1, 1], &[&[1, 0], &[0, 1]]), &ReportOptions::default())
            .unwrap();
        assert!(r.pi1.flags.abelian && r.pi1.flags.aspherical);
        assert_eq!(r.betti, vec![1, 2, 1]);
        assert!(r.fan.flag);
    }

    #[test]
    fn scrambled_input_is_normalized() {
        let r = Report::build(&mat(&[1, 1], &[&[1, 0], &[1, 1]]), &ReportOptions::default())
            .unwrap();
        assert_eq!(r.permutation, vec![1, 0]);
        assert_eq!(r.normalized_rows, vec![vec![1, 1], vec![0, 1]]);
        assert!(!r.orientable);
        assert_eq!(r.spin, None);
    }

    #[test]
    fn inadmissible_input() {
        let err = Report::build(&mat(&[1, 1], &[&[1, 1], &[1, 1]]), &ReportOptions::default());
        assert!(matches!(err, Err(Error::Inadmissible(_))));
    }

    #[test]
    fn optional_sections() {
        let a = mat(&[2, 1], &[&[1, 1, 1], &[0, 0, 1]]);
        let opts = ReportOptions {
            dot: true,
            homotopy: Some(2),
        };
        let r = Report::build(&a, &opts).unwrap();
        assert_eq!(r.higher_homotopy.as_deref(), Some("Z"));
        assert!(r.digraph_dot.as_deref().unwrap().starts_with("digraph"));
        let text = r.to_string();
        assert!(text.contains("orientable      yes"));

        let json = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let plain = Report::build(&a, &ReportOptions::default()).unwrap();
        let json = serde_json::to_value(&plain).unwrap();
        assert!(json.get("digraph_dot").is_none());
        assert!(json["spin"].as_bool().unwrap());
    }
}
