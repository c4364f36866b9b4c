//! JSON and CSV serialization of censuses, related-class identifications,
//! deformation images and fixture data. All exports carry the versioned
//! schema tag and use the canonical tuple ordering, so output is
//! byte-stable across runs.

use crate::census::{self, GenusInvariant, RelatedClasses};
use crate::deform::{PolarizedInvariant, Sources};
use crate::error::Error;
use crate::lattice::{group_g, make_type, Surface};
use serde_json::{json, Value};

pub const SCHEMA: &str = "k3census/1";

fn tuple_core(g: &GenusInvariant) -> Value {
    json!({
        "surface": g.surface.name(),
        "r": g.r,
        "a": g.a,
        "H": g.h_name(),
        "delta_phiS": g.delta_phi_s,
        "v": g.v_name(),
    })
}

fn tuple_record(g: &GenusInvariant) -> Result<Value, Error> {
    let related = census::related(g)?;
    let topology = census::topology(g.r, g.a, g.delta_phi())?;
    let mut rec = tuple_core(g);
    let obj = rec.as_object_mut().expect("record object");
    obj.insert("delta_phi".into(), json!(g.delta_phi()));
    obj.insert("type".into(), json!(g.tuple_type().to_string()));
    obj.insert("topology".into(), json!(topology.to_string()));
    obj.insert("unique".into(), json!(census::uniqueness_flag(g)));
    obj.insert("related".into(), tuple_core(&census::canonicalize(&related)));
    Ok(rec)
}

pub fn census_json(surface: Surface, census: &[GenusInvariant]) -> Result<String, Error> {
    let records: Vec<Value> = census.iter().map(tuple_record).collect::<Result<_, _>>()?;
    let doc = json!({
        "schema": SCHEMA,
        "surface": surface.name(),
        "count": census.len(),
        "census": records,
    });
    Ok(format!("{:#}", doc))
}

pub fn census_csv(census: &[GenusInvariant]) -> Result<String, Error> {
    let mut out = String::from(
        "surface,r,a,H,delta_phiS,v,delta_phi,type,topology,unique,\
         related_r,related_a,related_H,related_delta_phiS,related_v\n",
    );
    for g in census {
        let related = census::canonicalize(&census::related(g)?);
        let topology = census::topology(g.r, g.a, g.delta_phi())?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            g.surface.name(),
            g.r,
            g.a,
            g.h_name(),
            g.delta_phi_s,
            g.v_name().unwrap_or_default(),
            g.delta_phi(),
            g.tuple_type(),
            topology,
            census::uniqueness_flag(g),
            related.r,
            related.a,
            related.h_name(),
            related.delta_phi_s,
            related.v_name().unwrap_or_default(),
        ));
    }
    Ok(out)
}

pub fn related_classes_json(
    surface: Surface,
    classes: &RelatedClasses,
) -> Result<String, Error> {
    let pairs: Vec<Value> = classes
        .pairs
        .iter()
        .map(|(a, b)| json!({ "first": tuple_core(a), "second": tuple_core(b) }))
        .collect();
    let fixed: Vec<Value> = classes.fixed.iter().map(tuple_core).collect();
    let doc = json!({
        "schema": SCHEMA,
        "surface": surface.name(),
        "class_count": classes.class_count(),
        "pairs": pairs,
        "fixed": fixed,
    });
    Ok(format!("{:#}", doc))
}

pub fn image_json(n: i64, image: &[(PolarizedInvariant, Sources)]) -> String {
    let records: Vec<Value> = image
        .iter()
        .map(|(p, sources)| {
            let srcs: Vec<Value> = sources
                .iter()
                .map(|(t, g)| {
                    let mut v = tuple_core(g);
                    v.as_object_mut()
                        .expect("source object")
                        .insert("scroll".into(), json!(t.name()));
                    v
                })
                .collect();
            json!({
                "n": p.n,
                "r": p.r,
                "a": p.a,
                "delta_P": p.delta_p,
                "delta_phi": p.delta_phi,
                "delta_phiP": p.delta_phi_p,
                "sources": srcs,
            })
        })
        .collect();
    let doc = json!({
        "schema": SCHEMA,
        "n": n,
        "count": image.len(),
        "image": records,
    });
    format!("{:#}", doc)
}

pub fn fixtures_json() -> String {
    let fixtures: Vec<Value> = Surface::ALL
        .iter()
        .map(|&surface| {
            let t = make_type(surface);
            let subgroups: Vec<Value> = t
                .subgroups
                .iter()
                .map(|s| json!({ "name": s.name, "gens": s.gens }))
                .collect();
            // The 2-adic determinant invariant is a constant per surface,
            // except that the glued type takes the value of delta_phi.
            let epsilon = if surface == Surface::Ellipsoid {
                "delta_phi"
            } else {
                "0"
            };
            json!({
                "surface": surface.name(),
                "basis": t.basis_names,
                "gram": t.s.gram(),
                "theta": t.theta,
                "s_plus_basis": t.s_plus_basis,
                "s_minus_basis": t.s_minus_basis,
                "subgroups": subgroups,
                "group_G_order": group_g(t).order,
                "s_theta": t.s_theta_bits(),
                "epsilon_table": { "v_plus": epsilon, "v_minus": epsilon },
            })
        })
        .collect();
    let doc = json!({ "schema": SCHEMA, "fixtures": fixtures });
    format!("{:#}", doc)
}
