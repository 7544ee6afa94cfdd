//! Hard-coded reference polynomials.

use super::BiPoly;
use crate::error::{domain, Result};

pub const BUILTIN_NAMES: [&str; 7] = ["phi2_j", "psi2", "psi3", "phi5", "phi7", "phi11", "phi13"];

pub fn builtin(name: &str) -> Result<BiPoly> {
    let terms: &[(u32, u32, i64)] = match name {
        "phi2_j" => &[
            (3, 0, 1),
            (2, 2, -1),
            (0, 3, 1),
            (2, 1, 1488),
            (1, 2, 1488),
            (2, 0, -162000),
            (0, 2, -162000),
            (1, 1, 40773375),
            (1, 0, 8748000000),
            (0, 1, 8748000000),
            (0, 0, -157464000000000),
        ],
        "psi2" => &[(2, 1, 1), (0, 2, -1), (1, 0, 16)],
        "psi3" => &[(4, 0, 1), (3, 3, -1), (1, 1, 8), (0, 4, 1)],
        "phi5" => &[(6, 0, 1), (5, 5, -1), (1, 1, 4), (0, 6, 1)],
        "phi7" => &[(8, 0, 1), (7, 7, -1), (4, 4, 7), (1, 1, -8), (0, 8, 1)],
        "phi11" => &[
            (12, 0, 1),
            (11, 11, -1),
            (9, 9, 11),
            (7, 7, -44),
            (5, 5, 88),
            (3, 3, -88),
            (1, 1, 32),
            (0, 12, 1),
        ],
        "phi13" => &[
            (14, 0, 1),
            (13, 13, -1),
            (12, 2, 13),
            (10, 4, 52),
            (8, 6, 78),
            (6, 8, 78),
            (4, 10, 52),
            (2, 12, 13),
            (1, 1, 64),
            (0, 14, 1),
        ],
        _ => return Err(domain!("unknown builtin polynomial '{name}'")),
    };
    Ok(BiPoly::from_int_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::CycloElt;

    #[test]
    fn known_shapes() {
        assert_eq!(builtin("psi3").unwrap().len(), 4);
        let phi11 = builtin("phi11").unwrap();
        assert_eq!(phi11.len(), 8);
        assert_eq!(phi11.coeff(1, 1), CycloElt::from_int(32));
        assert_eq!(phi11.coeff(0, 12), CycloElt::one());
        let j2 = builtin("phi2_j").unwrap();
        assert_eq!(j2.coeff(0, 0), CycloElt::from_int(-157464000000000));
        assert!(builtin("phi4").is_err());
    }

    #[test]
    fn builtins_are_normalized() {
        for name in BUILTIN_NAMES {
            let p = builtin(name).unwrap();
            assert_eq!(p.normalized().unwrap(), p, "{name}");
        }
    }
}
