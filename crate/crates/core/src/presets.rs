//! Named surfaces with a sampling domain and, where one exists, a Killing
//! vector.

use crate::ellipsoid::{ellipsoid_domain, ellipsoid_surface, EllipsoidParams};
use crate::error::{Error, Result};
use crate::expr::Bindings;
use crate::fields::VectorField;
use crate::geometry::{Domain, LiouvilleSurface};
use crate::separation::beta_catalog;

pub const PRESET_NAMES: [&str; 7] = ["plane-cartesian", "plane-polar", "plane-parabolic", "sphere", "pseudosphere", "torus", "ellipsoid"];

/// The presets that admit a Killing vector and hence second-order operators.
pub const REVOLUTION_PRESETS: [&str; 6] = ["plane-cartesian", "plane-polar", "plane-parabolic", "sphere", "pseudosphere", "torus"];

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: String,
    pub surface: LiouvilleSurface,
    pub domain: Domain,
    pub killing_vector: Option<VectorField>,
    /// `β` with `B = β^{-2}` for the separation catalog entries.
    pub beta: Option<String>,
    pub catalog_label: Option<&'static str>,
}

fn binding(b: &Bindings, key: &str, default: f64) -> f64 {
    b.get(key).copied().unwrap_or(default)
}

/// Build a preset; parameters are read from `bindings` (`k` for the torus,
/// `a` for the parabolic plane, `a, b, c, h` for the ellipsoid).
pub fn preset(name: &str, bindings: &Bindings) -> Result<Preset> {
    match name {
        "plane-parabolic" => {
            let a = binding(bindings, "a", 1.0);
            if a <= 0.0 {
                return Err(Error::Invalid(format!("plane-parabolic needs a > 0, got {a}")));
            }
            let b = Bindings::from([("a".to_string(), a)]);
            Ok(Preset {
                name: name.into(),
                surface: LiouvilleSurface::from_exprs(name, "a*u^2", "a*v^2", &b)?,
                domain: Domain::new(0.5, 1.5, 0.5, 1.5),
                killing_vector: Some(VectorField::rotation().scaled(0.5)),
                beta: None,
                catalog_label: Some("plane, parabolic coordinates"),
            })
        }
        "ellipsoid" => {
            let p = EllipsoidParams {
                a: binding(bindings, "a", 1.0),
                b: binding(bindings, "b", 2.0),
                c: binding(bindings, "c", 3.0),
                h: binding(bindings, "h", 4.0),
            };
            Ok(Preset {
                name: name.into(),
                surface: ellipsoid_surface(p)?,
                domain: ellipsoid_domain(p)?,
                killing_vector: None,
                beta: None,
                catalog_label: Some("asymmetric ellipsoid"),
            })
        }
        _ => {
            let entry = beta_catalog()
                .into_iter()
                .find(|e| e.name == name)
                .ok_or_else(|| Error::Invalid(format!("unknown preset `{name}` (known: {})", PRESET_NAMES.join(", "))))?;
            let mut entry = entry;
            if name == "torus" {
                let k = binding(bindings, "k", 2.0);
                if k <= 1.0 {
                    return Err(Error::Invalid(format!("torus needs k > 1, got {k}")));
                }
                entry.bindings.insert("k".into(), k);
            }
            Ok(Preset {
                name: name.into(),
                surface: entry.surface()?,
                domain: entry.domain,
                killing_vector: Some(VectorField::coordinate_u()),
                beta: Some(entry.beta.to_string()),
                catalog_label: Some(entry.catalog_label),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        for n in PRESET_NAMES {
            let p = preset(n, &Bindings::new()).unwrap();
            assert!(p.surface.conformal_factor(p.domain.center()).unwrap() > 0.0, "{n}");
        }
        assert!(preset("cylinder", &Bindings::new()).is_err());
    }
}
