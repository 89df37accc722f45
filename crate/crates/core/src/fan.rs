//! Fans of smooth complete toric varieties: the file format, structural
//! validation, and the face lattice of ray subsets.
//!
//! A fan is given by its primitive ray generators and its maximal cones (index
//! sets into the ray list). Validation checks regularity (every maximal cone
//! is unimodular), completeness via facet pairing plus a sample-vector panel,
//! and basic well-formedness of the data.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::{det, int_mat_from_i64, solve_unimodular};

/// Ray generators and maximal cones, exactly as listed in the input file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Parse the JSON fan format. Syntax-level checks only: ray dimensions
    /// must agree and cone indices must be in range. Geometric validation is
    /// a separate step.
    pub fn parse(text: &str) -> Result<Fan, Error> {
        let fan: Fan = serde_json::from_str(text).map_err(|e| Error::FanSyntax(e.to_string()))?;
        if fan.rays.is_empty() {
            return Err(Error::FanSyntax("fan has no rays".into()));
        }
        let d = fan.rays[0].len();
        if d == 0 {
            return Err(Error::FanSyntax("rays must have positive dimension".into()));
        }
        for (i, r) in fan.rays.iter().enumerate() {
            if r.len() != d {
                return Err(Error::FanSyntax(format!(
                    "ray {} has dimension {}, expected {}",
                    i,
                    r.len(),
                    d
                )));
            }
        }
        let n = fan.rays.len();
        for (c, cone) in fan.max_cones.iter().enumerate() {
            for &idx in cone {
                if idx >= n {
                    return Err(Error::FanSyntax(format!(
                        "cone {} references ray {} but only {} rays are listed",
                        c, idx, n
                    )));
                }
            }
        }
        Ok(fan)
    }

    /// Canonical serialization: fixed key order, one-shot round trip.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fan serialization cannot fail")
    }

    pub fn dim(&self) -> usize {
        self.rays.first().map_or(0, |r| r.len())
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn validate(&self) -> FanReport {
        validate_fan(self)
    }
}

/// A single failed validation check, with enough indices to locate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize },
    DuplicateRay { first: usize, second: usize },
    WrongConeSize { cone: usize, size: usize, expected: usize },
    RepeatedRayInCone { cone: usize },
    DuplicateCone { first: usize, second: usize },
    NotUnimodular { cone: usize, determinant: BigInt },
    /// A facet (codimension-one face) of `cone` is contained in `count`
    /// maximal cones total; completeness requires exactly two.
    UnmatchedFacet { cone: usize, facet: Vec<usize>, count: usize },
    AdjacencyDisconnected { reached: usize, total: usize },
    SampleVectorOutside { vector: Vec<i64> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroRay { ray } => write!(f, "ray {ray} is the zero vector"),
            Violation::NonPrimitiveRay { ray } => {
                write!(f, "ray {ray} is not primitive (entry gcd > 1)")
            }
            Violation::DuplicateRay { first, second } => {
                write!(f, "rays {first} and {second} are equal")
            }
            Violation::WrongConeSize { cone, size, expected } => {
                write!(f, "cone {cone} lists {size} rays, expected {expected}")
            }
            Violation::RepeatedRayInCone { cone } => {
                write!(f, "cone {cone} repeats a ray index")
            }
            Violation::DuplicateCone { first, second } => {
                write!(f, "cones {first} and {second} have the same ray set")
            }
            Violation::NotUnimodular { cone, determinant } => {
                write!(f, "cone {cone} has ray determinant {determinant}, expected +-1")
            }
            Violation::UnmatchedFacet { cone, facet, count } => write!(
                f,
                "facet {facet:?} of cone {cone} lies in {count} maximal cone(s), expected 2 \
                 (fan is not complete)"
            ),
            Violation::AdjacencyDisconnected { reached, total } => write!(
                f,
                "cone adjacency graph is disconnected ({reached} of {total} cones reachable)"
            ),
            Violation::SampleVectorOutside { vector } => {
                write!(f, "sample direction {vector:?} is not covered by any maximal cone")
            }
        }
    }
}

/// Outcome of `validate_fan`: either clean or a list of named violations.
#[derive(Debug, Clone, Default)]
pub struct FanReport {
    pub violations: Vec<Violation>,
}

impl FanReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for FanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "ok")
        } else {
            for v in &self.violations {
                writeln!(f, "violation: {v}")?;
            }
            Ok(())
        }
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Is `v` a nonnegative combination of the cone's rays? The cone is assumed
/// unimodular so the coefficients are integers obtained by an exact solve.
fn cone_contains(fan: &Fan, cone: &[usize], v: &[i64]) -> bool {
    let d = fan.dim();
    // columns are the ray generators
    let mut m = vec![vec![BigInt::zero(); d]; d];
    for (k, &ri) in cone.iter().enumerate() {
        for row in 0..d {
            m[row][k] = BigInt::from(fan.rays[ri][row]);
        }
    }
    let rhs: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    match solve_unimodular(&m, &rhs) {
        Some(coeffs) => coeffs.iter().all(|c| !c.is_negative()),
        None => false,
    }
}

pub fn validate_fan(fan: &Fan) -> FanReport {
    let mut report = FanReport::default();
    let d = fan.dim();
    let n = fan.n_rays();

    for (i, r) in fan.rays.iter().enumerate() {
        if r.iter().all(|&x| x == 0) {
            report.violations.push(Violation::ZeroRay { ray: i });
            continue;
        }
        let g = r.iter().fold(0i64, |acc, &x| gcd_i64(acc, x));
        if g != 1 {
            report.violations.push(Violation::NonPrimitiveRay { ray: i });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if fan.rays[i] == fan.rays[j] {
                report.violations.push(Violation::DuplicateRay { first: i, second: j });
            }
        }
    }

    let mut structurally_sound = report.is_ok();
    for (c, cone) in fan.max_cones.iter().enumerate() {
        if cone.len() != d {
            report.violations.push(Violation::WrongConeSize {
                cone: c,
                size: cone.len(),
                expected: d,
            });
            structurally_sound = false;
            continue;
        }
        let mut sorted = cone.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != d {
            report.violations.push(Violation::RepeatedRayInCone { cone: c });
            structurally_sound = false;
        }
    }
    let cone_sets: Vec<Vec<usize>> = fan
        .max_cones
        .iter()
        .map(|c| {
            let mut s = c.clone();
            s.sort_unstable();
            s
        })
        .collect();
    for i in 0..cone_sets.len() {
        for j in i + 1..cone_sets.len() {
            if cone_sets[i] == cone_sets[j] {
                report.violations.push(Violation::DuplicateCone { first: i, second: j });
                structurally_sound = false;
            }
        }
    }
    if !structurally_sound || fan.max_cones.is_empty() {
        if fan.max_cones.is_empty() {
            report.violations.push(Violation::AdjacencyDisconnected { reached: 0, total: 0 });
        }
        return report;
    }

    for (c, cone) in fan.max_cones.iter().enumerate() {
        let m = int_mat_from_i64(
            &cone.iter().map(|&ri| fan.rays[ri].clone()).collect::<Vec<_>>(),
        );
        let dt = det(&m);
        if dt.abs() != BigInt::from(1) {
            report
                .violations
                .push(Violation::NotUnimodular { cone: c, determinant: dt });
        }
    }

    // facet pairing: every (d-1)-subset of a maximal cone must occur in
    // exactly two maximal cones, and the sharing graph must be connected
    let mut facets: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (c, sorted) in cone_sets.iter().enumerate() {
        for omit in 0..d {
            let facet: Vec<usize> = sorted
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != omit)
                .map(|(_, &ri)| ri)
                .collect();
            facets.entry(facet).or_default().push(c);
        }
    }
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); fan.max_cones.len()];
    let mut sorted_facets: Vec<(&Vec<usize>, &Vec<usize>)> = facets.iter().collect();
    sorted_facets.sort();
    for (facet, owners) in sorted_facets {
        if owners.len() != 2 {
            report.violations.push(Violation::UnmatchedFacet {
                cone: owners[0],
                facet: facet.clone(),
                count: owners.len(),
            });
        } else {
            adjacency[owners[0]].push(owners[1]);
            adjacency[owners[1]].push(owners[0]);
        }
    }
    let mut seen = vec![false; fan.max_cones.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut reached = 1usize;
    while let Some(c) = stack.pop() {
        for &nb in &adjacency[c] {
            if !seen[nb] {
                seen[nb] = true;
                reached += 1;
                stack.push(nb);
            }
        }
    }
    if reached != fan.max_cones.len() {
        report.violations.push(Violation::AdjacencyDisconnected {
            reached,
            total: fan.max_cones.len(),
        });
    }

    // sample panel: all +-unit vectors and all +-1 diagonal vectors must lie
    // in the support; cheap and catches half-space style gaps at small d
    if report.is_ok() {
        let mut panel: Vec<Vec<i64>> = Vec::new();
        for i in 0..d {
            for s in [1i64, -1] {
                let mut v = vec![0i64; d];
                v[i] = s;
                panel.push(v);
            }
        }
        for mask in 0..(1u32 << d) {
            let v: Vec<i64> = (0..d)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            panel.push(v);
        }
        for v in panel {
            if !fan.max_cones.iter().any(|c| cone_contains(fan, c, &v)) {
                report.violations.push(Violation::SampleVectorOutside { vector: v });
            }
        }
    }

    report
}

/// The simplicial face lattice: which subsets of rays span a cone of the fan.
///
/// Faces are exactly the subsets of some maximal cone's ray set. The lattice
/// also carries the f-vector and the inclusion-exclusion weights used by the
/// generalized Moebius function.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    n: usize,
    is_face: Vec<bool>,
    f_vector: Vec<u64>,
    mu: Vec<i64>,
}

pub const MAX_RAYS_FOR_LATTICE: usize = 20;

impl FaceLattice {
    pub fn new(fan: &Fan) -> Result<FaceLattice, Error> {
        let n = fan.n_rays();
        if n > MAX_RAYS_FOR_LATTICE {
            return Err(Error::TooManyRays { n, max: MAX_RAYS_FOR_LATTICE });
        }
        let size = 1usize << n;
        let mut is_face = vec![false; size];
        for cone in &fan.max_cones {
            let mask: usize = cone.iter().map(|&i| 1usize << i).sum();
            // all submasks of the cone mask, including the empty set
            let mut sub = mask;
            loop {
                is_face[sub] = true;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        let mut f_vector = vec![0u64; n + 1];
        for (m, &b) in is_face.iter().enumerate() {
            if b {
                f_vector[m.count_ones() as usize] += 1;
            }
        }
        // superset-wise Moebius transform of the face indicator: after the
        // loop, mu[s] = sum over subsets s' of s of (-1)^{|s \ s'|} [s' face]
        let mut mu: Vec<i64> = is_face.iter().map(|&b| i64::from(b)).collect();
        for bit in 0..n {
            for m in 0..size {
                if m >> bit & 1 == 1 {
                    mu[m] -= mu[m ^ (1 << bit)];
                }
            }
        }
        Ok(FaceLattice { n, is_face, f_vector, mu })
    }

    pub fn n_rays(&self) -> usize {
        self.n
    }

    pub fn is_face(&self, mask: u32) -> bool {
        self.is_face[mask as usize]
    }

    /// f_k = number of k-element ray subsets spanning a cone.
    pub fn f_vector(&self) -> &[u64] {
        &self.f_vector
    }

    /// Inclusion-exclusion weight of a support set; zero unless every proper
    /// subset pattern cancels, by construction of the transform.
    pub fn mu(&self, mask: u32) -> i64 {
        self.mu[mask as usize]
    }

    /// Smallest cardinality of a ray subset that does not span a cone. At
    /// least 2 for complete fans.
    pub fn min_nonface_size(&self) -> usize {
        for size in 1..=self.n {
            let mut found = false;
            for m in 0..(1u32 << self.n) {
                if m.count_ones() as usize == size && !self.is_face(m) {
                    found = true;
                    break;
                }
            }
            if found {
                return size;
            }
        }
        self.n + 1
    }

    /// Supports with nonzero weight, as (mask, popcount, mu).
    pub fn nonzero_supports(&self) -> Vec<(u32, u32, i64)> {
        (0..(1u32 << self.n))
            .filter(|&m| m != 0 && self.mu[m as usize] != 0)
            .map(|m| (m, m.count_ones(), self.mu[m as usize]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn p2() -> Fan {
        Fan::parse(
            r#"{"rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2],[2,0]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn parse_p2() {
        let fan = p2();
        assert_eq!(fan.dim(), 2);
        assert_eq!(fan.n_rays(), 3);
    }

    #[test]
    fn parse_p1() {
        let fan = Fan::parse(r#"{"rays": [[1],[-1]], "max_cones": [[0],[1]]}"#).unwrap();
        assert_eq!(fan.dim(), 1);
        assert_eq!(fan.n_rays(), 2);
        assert!(fan.validate().is_ok());
    }

    #[test]
    fn parse_accepts_non_primitive_ray_validate_rejects() {
        let fan = Fan::parse(r#"{"rays": [[2,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2],[2,0]]}"#)
            .unwrap();
        let report = fan.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NonPrimitiveRay { ray: 0 })));
    }

    #[test]
    fn parse_rejects_out_of_range_cone() {
        let err = Fan::parse(r#"{"rays": [[1],[-1]], "max_cones": [[0],[2]]}"#);
        assert!(err.is_err());
    }

    #[test]
    fn parse_rejects_mixed_dimension() {
        let err = Fan::parse(r#"{"rays": [[1,0],[1]], "max_cones": [[0]]}"#);
        assert!(err.is_err());
    }

    #[test]
    fn validate_p2_ok() {
        assert!(p2().validate().is_ok());
    }

    #[test]
    fn validate_half_plane_not_complete() {
        let fan = Fan::parse(r#"{"rays": [[1,0],[0,1]], "max_cones": [[0,1]]}"#).unwrap();
        let report = fan.validate();
        assert!(!report.is_ok());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::UnmatchedFacet { .. })));
    }

    #[test]
    fn validate_hirzebruch_ok() {
        let fan = Fan::parse(
            r#"{"rays": [[1,0],[0,1],[-1,1],[0,-1]], "max_cones": [[0,1],[1,2],[2,3],[3,0]]}"#,
        )
        .unwrap();
        assert!(fan.validate().is_ok());
    }

    #[test]
    fn validate_rejects_singular_cone() {
        // cone spanned by (1,0) and (1,2) has determinant 2
        let fan = Fan::parse(
            r#"{"rays": [[1,0],[1,2],[-1,-1]], "max_cones": [[0,1],[1,2],[2,0]]}"#,
        )
        .unwrap();
        let report = fan.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotUnimodular { cone: 0, .. })));
    }

    #[test]
    fn round_trip_is_canonical() {
        let fan = p2();
        let text = fan.to_json();
        let again = Fan::parse(&text).unwrap();
        assert_eq!(fan, again);
        assert_eq!(text, again.to_json());
    }

    #[test]
    fn face_lattice_p2() {
        let lat = FaceLattice::new(&p2()).unwrap();
        assert_eq!(lat.f_vector(), &[1, 3, 3, 0]);
        assert!(lat.is_face(0b011));
        assert!(!lat.is_face(0b111));
        assert_eq!(lat.min_nonface_size(), 3);
        assert_eq!(lat.mu(0b111), -1);
        assert_eq!(lat.mu(0b001), 0);
        assert_eq!(lat.mu(0b000), 1);
    }

    #[test]
    fn face_lattice_product_of_lines() {
        let fan = Fan::parse(
            r#"{"rays": [[1,0],[-1,0],[0,1],[0,-1]], "max_cones": [[0,2],[2,1],[1,3],[3,0]]}"#,
        )
        .unwrap();
        let lat = FaceLattice::new(&fan).unwrap();
        assert_eq!(lat.f_vector(), &[1, 4, 4, 0, 0]);
        assert_eq!(lat.min_nonface_size(), 2); // opposite rays span no cone
        assert!(!lat.is_face(0b0011));
        assert!(lat.is_face(0b0101));
    }
}
