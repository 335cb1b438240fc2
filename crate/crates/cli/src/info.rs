use std::sync::Arc;

use anyhow::{bail, Context, Result};
use k1lab::brauer::{brauer_coefficients, verify_section, BrauerElementJson};
use k1lab::character::irreducibles;
use k1lab::group::{catalog, catalog_by_key, Section};
use serde::Serialize;

use crate::manifest::FORMAT_VERSION;

#[derive(Debug, Clone, Serialize)]
pub struct CatalogRow {
    pub key: String,
    pub p: u64,
    pub order: usize,
    pub exponent: usize,
    pub abelian: bool,
    pub classes: usize,
    pub center: usize,
    /// Abelianization as `C_{p^a1} x C_{p^a2} x ...`, given by the `ai`.
    pub abelianization: Vec<u32>,
}

pub fn catalog_rows(p: Option<u64>, order: Option<usize>) -> Vec<CatalogRow> {
    catalog()
        .into_iter()
        .filter(|e| p.is_none_or(|p| e.p == p) && order.is_none_or(|n| e.order == n))
        .map(|e| {
            let g = e.build();
            let ab = Section::abelianization(&g);
            CatalogRow {
                key: e.key.clone(),
                p: e.p,
                order: e.order,
                exponent: g.exponent(),
                abelian: g.is_abelian(),
                classes: g.num_classes(),
                center: g.center().len(),
                abelianization: ab.group().abelian_invariants().expect("abelianization is abelian"),
            }
        })
        .collect()
}

pub fn render_catalog(rows: &[CatalogRow]) -> String {
    let mut out = String::from("key\tp\torder\texponent\tabelian\tclasses\tcenter\tabelianization\n");
    for r in rows {
        let ab: Vec<String> = r.abelianization.iter().map(|a| r.p.pow(*a).to_string()).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\tC{}\n",
            r.key,
            r.p,
            r.order,
            r.exponent,
            r.abelian,
            r.classes,
            r.center,
            ab.join("xC")
        ));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct BrauerOutput {
    pub format_version: u32,
    pub group: String,
    pub character: usize,
    pub degree: i64,
    pub verify_section: bool,
    pub element: BrauerElementJson,
}

pub fn brauer(key: &str, index: usize) -> Result<BrauerOutput> {
    let entry = catalog_by_key(key).with_context(|| format!("no catalog group `{key}`; see `k1lab catalog`"))?;
    let g = Arc::new(entry.build());
    let irr = irreducibles(&g)?;
    let Some(rho) = irr.get(index) else {
        bail!("character index {index} out of range: {} has {} irreducibles", entry.key, irr.len());
    };
    let b = brauer_coefficients(rho)?;
    Ok(BrauerOutput {
        format_version: FORMAT_VERSION,
        group: entry.key,
        character: index,
        degree: rho.degree(),
        verify_section: verify_section(&b, rho),
        element: b.to_json(),
    })
}
