//! Built-in identities, each stored as `LHS - RHS` in the DSL.

use super::{Identity, IdentityError};
use crate::normal::normalize;
use crate::term::parse_expr;
use crate::Rational;

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "malcev",
        summary: "untwisted Malcev identity J(x,y,xz) = J(x,y,z)x",
        source: "vars x,y,z; (x*y)*(x*z) + (y*(x*z))*x + ((x*z)*x)*y - ((x*y)*z + (y*z)*x + (z*x)*y)*x",
    },
    CatalogEntry {
        name: "hom_malcev",
        summary: "Hom-Malcev identity J(a(x),a(y),xz) = J(x,y,z)a2(x)",
        source: "vars x,y,z; J(a(x),a(y),x*z) - J(x,y,z)*a2(x)",
    },
    CatalogEntry {
        name: "hom_jacobi",
        summary: "Hom-Jacobi identity J(x,y,z) = 0",
        source: "vars x,y,z; J(x,y,z)",
    },
    CatalogEntry {
        name: "identity_1_2",
        summary: "J(wx,a(y),a(z)) = J(w,y,z)a2(x) + a2(w)J(x,y,z) - 2J(yz,a(w),a(x))",
        source: "vars w,x,y,z; J(w*x,a(y),a(z)) - (J(w,y,z)*a2(x) + a2(w)*J(x,y,z) - 2*J(y*z,a(w),a(x)))",
    },
    CatalogEntry {
        name: "lemma_2_4_ii",
        summary: "alternating sum of a2(-)J(-,-,-) against six J(uv,a(-),a(-)) terms; holds in every anticommutative multiplicative Hom-algebra",
        source: "vars w,x,y,z; a2(w)*J(x,y,z) - a2(x)*J(y,z,w) + a2(y)*J(z,w,x) - a2(z)*J(w,x,y) \
                 - (J(w*x,a(y),a(z)) + J(y*z,a(w),a(x)) + J(w*y,a(z),a(x)) \
                 + J(z*x,a(w),a(y)) - J(z*w,a(x),a(y)) - J(x*y,a(z),a(w)))",
    },
    CatalogEntry {
        name: "g_def",
        summary: "defining expansion of G; identically zero",
        source: "vars w,x,y,z; G(w,x,y,z) - (J(w*x,a(y),a(z)) - a2(x)*J(w,y,z) - J(x,y,z)*a2(w))",
    },
    CatalogEntry {
        name: "eq_2_2",
        summary: "cyclic sum of J(uv,a(-),a(-)) over (w,x,y,z) vanishes",
        source: "vars w,x,y,z; J(w*x,a(y),a(z)) + J(x*y,a(z),a(w)) + J(y*z,a(w),a(x)) + J(z*w,a(x),a(y))",
    },
    CatalogEntry {
        name: "eq_2_3",
        summary: "2G(w,x,y,z) minus alternating a2 terms equals J(wx,a(y),a(z)) + J(yz,a(w),a(x))",
        source: "vars w,x,y,z; 2*G(w,x,y,z) - a2(w)*J(x,y,z) + a2(x)*J(w,y,z) - a2(y)*J(z,w,x) + a2(z)*J(w,x,y) \
                 - (J(w*x,a(y),a(z)) + J(y*z,a(w),a(x)))",
    },
    CatalogEntry {
        name: "eq_2_4",
        summary: "G(w,x,y,z) = 2[J(wx,a(y),a(z)) + J(yz,a(w),a(x))]",
        source: "vars w,x,y,z; G(w,x,y,z) - 2*(J(w*x,a(y),a(z)) + J(y*z,a(w),a(x)))",
    },
    CatalogEntry {
        name: "eq_2_5",
        summary: "alternating a2 sum equals 3[J(wx,a(y),a(z)) + J(yz,a(w),a(x))]",
        source: "vars w,x,y,z; a2(w)*J(x,y,z) - a2(x)*J(y,z,w) + a2(y)*J(z,w,x) - a2(z)*J(w,x,y) \
                 - 3*(J(w*x,a(y),a(z)) + J(y*z,a(w),a(x)))",
    },
    CatalogEntry {
        name: "eq_2_7",
        summary: "identity_1_2 with w = y",
        source: "vars x,y,z; J(y*x,a(y),a(z)) - (a2(y)*J(y,z,x) - 2*J(a(y),a(x),y*z))",
    },
    CatalogEntry {
        name: "eq_2_8",
        summary: "eq_2_7 with x and z exchanged, doubled and rearranged",
        source: "vars x,y,z; 4*J(a(y),a(z),y*x) - (-2*a2(y)*J(y,z,x) - 2*J(y*z,a(y),a(x)))",
    },
];

pub fn catalog_names() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().map(|e| e.name)
}

/// Looks up a built-in identity and returns it normalized.
pub fn catalog(name: &str) -> Result<Identity<Rational>, IdentityError> {
    let entry = CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| IdentityError::UnknownName(name.to_string()))?;
    let parsed = parse_expr(entry.source).expect("catalog sources are valid");
    Ok(Identity::new(normalize(&parsed.expr), parsed.vars))
}
