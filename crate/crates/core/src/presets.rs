//! Constructors for the standard test fans.

use crate::error::Result;
use crate::fan::Fan;
use crate::variety::ToricVariety;

/// Projective space of dimension n: unit rays plus the all-minus-one ray,
/// maximal cones omit one ray each.
pub fn projective_space(n: usize) -> Result<ToricVariety> {
    assert!(n >= 1);
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    rays.push(vec![-1; n]);
    let max_cones: Vec<Vec<usize>> = (0..=n)
        .map(|omit| (0..=n).filter(|&i| i != omit).collect())
        .collect();
    ToricVariety::new(Fan { name: Some(format!("P{n}")), rays, max_cones })
}

/// The product of two projective lines: rays +-e1, +-e2 with the four
/// quadrant cones.
pub fn p1_cross_p1() -> Result<ToricVariety> {
    ToricVariety::new(Fan {
        name: Some("P1xP1".into()),
        rays: vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
        max_cones: vec![vec![0, 2], vec![2, 1], vec![1, 3], vec![3, 0]],
    })
}

/// Hirzebruch surface with parameter a >= 0. The anticanonical divisor is
/// globally generated for a <= 2.
pub fn hirzebruch(a: i64) -> Result<ToricVariety> {
    ToricVariety::new(Fan {
        name: Some(format!("F{a}")),
        rays: vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
        max_cones: vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    })
}

/// The blow-up of the projective plane in two torus-fixed points (a del Pezzo
/// surface of degree 7, Picard rank 3).
pub fn del_pezzo7() -> Result<ToricVariety> {
    ToricVariety::new(Fan {
        name: Some("dP7".into()),
        rays: vec![
            vec![1, 0],
            vec![1, 1],
            vec![0, 1],
            vec![-1, 0],
            vec![-1, -1],
        ],
        max_cones: vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]],
    })
}

/// The fan test battery used throughout: P1, P2, P1xP1, F1, P3.
pub fn standard_varieties() -> Vec<ToricVariety> {
    vec![
        projective_space(1).unwrap(),
        projective_space(2).unwrap(),
        p1_cross_p1().unwrap(),
        hirzebruch(1).unwrap(),
        projective_space(3).unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for tv in standard_varieties() {
            assert!(tv.fan.validate().is_ok(), "{:?}", tv.fan.name);
        }
        assert!(del_pezzo7().is_ok());
        assert!(hirzebruch(2).is_ok());
    }

    #[test]
    fn ranks() {
        assert_eq!(projective_space(1).unwrap().rank(), 1);
        assert_eq!(projective_space(3).unwrap().rank(), 1);
        assert_eq!(p1_cross_p1().unwrap().rank(), 2);
        assert_eq!(hirzebruch(1).unwrap().rank(), 2);
        assert_eq!(del_pezzo7().unwrap().rank(), 3);
    }

    #[test]
    fn hirzebruch_f3_rejected() {
        // -K is not globally generated on F3
        let err = hirzebruch(3);
        assert!(err.is_err());
    }
}
