//! JSON file formats for meshes and cochains.
//!
//! Mesh: `{ "vertices": [[x,y,z], ...], "cells": [[v0..vd], ...] }` — cells
//! are top simplices in oriented vertex order; lower simplices are inferred.
//!
//! Cochain: `{ "degree": k, "kind": "real"|"phase",
//!             "values": { "v0,v1,...": number | [re, im], ... } }` — keys
//! are sorted vertex tuples, values on the canonical orientation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::cochain::{C64, Cochain, CochainKind};
use super::SimplicialComplex;
use crate::error::{HoloError, Result};

#[derive(Serialize, Deserialize)]
struct MeshFile {
    vertices: Vec<[f64; 3]>,
    cells: Vec<Vec<usize>>,
}

pub fn mesh_to_json(cx: &SimplicialComplex) -> Result<String> {
    let dim = cx.dimension();
    let mut cells = Vec::with_capacity(cx.n_simplices(dim));
    for i in 0..cx.n_simplices(dim) {
        let mut verts = cx.simplex_vertices(dim, i);
        if cx.orientation(i) < 0 && verts.len() >= 2 {
            verts.swap(0, 1);
        }
        cells.push(verts);
    }
    let vertices = match cx.coords() {
        Some(c) => c.to_vec(),
        None => vec![[0.0; 3]; cx.n_vertices()],
    };
    Ok(serde_json::to_string_pretty(&MeshFile { vertices, cells })?)
}

pub fn mesh_from_json(json: &str) -> Result<SimplicialComplex> {
    let file: MeshFile = serde_json::from_str(json)?;
    SimplicialComplex::from_cells(&file.cells, Some(file.vertices))
}

#[derive(Serialize, Deserialize)]
struct CochainFile {
    degree: usize,
    kind: String,
    values: BTreeMap<String, Value>,
}

fn key_of(verts: &[usize]) -> String {
    verts
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn cochain_to_json(cx: &SimplicialComplex, c: &Cochain) -> Result<String> {
    let degree = c.degree();
    if c.len() != cx.n_simplices(degree) {
        return Err(HoloError::InvalidInput(
            "cochain length does not match complex".into(),
        ));
    }
    let mut values = BTreeMap::new();
    for i in 0..c.len() {
        let key = key_of(&cx.simplex_vertices(degree, i));
        let v = match c.kind() {
            CochainKind::Real => serde_json::json!(c.real_values()[i]),
            CochainKind::Phase => {
                let z = c.phase_values()[i];
                serde_json::json!([z.re, z.im])
            }
        };
        values.insert(key, v);
    }
    let kind = match c.kind() {
        CochainKind::Real => "real",
        CochainKind::Phase => "phase",
    }
    .to_string();
    Ok(serde_json::to_string_pretty(&CochainFile {
        degree,
        kind,
        values,
    })?)
}

pub fn cochain_from_json(cx: &SimplicialComplex, json: &str) -> Result<Cochain> {
    let file: CochainFile = serde_json::from_str(json)?;
    let degree = file.degree;
    let n = cx.n_simplices(degree);
    if file.values.len() != n {
        return Err(HoloError::InvalidInput(format!(
            "cochain file covers {} of {} degree-{degree} simplices",
            file.values.len(),
            n
        )));
    }
    let lookup = |key: &str| -> Result<usize> {
        let verts: Vec<usize> = key
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| HoloError::InvalidInput(format!("bad simplex key {key}")))
            })
            .collect::<Result<_>>()?;
        match cx.resolve(&verts) {
            Some((idx, 1)) => Ok(idx),
            Some(_) => Err(HoloError::InvalidInput(format!(
                "simplex key {key} is not sorted"
            ))),
            None => Err(HoloError::InvalidInput(format!(
                "simplex {key} not in complex"
            ))),
        }
    };
    match file.kind.as_str() {
        "real" => {
            let mut vals = vec![0.0; n];
            for (key, v) in &file.values {
                let idx = lookup(key)?;
                vals[idx] = v
                    .as_f64()
                    .ok_or_else(|| HoloError::InvalidInput(format!("bad real value at {key}")))?;
            }
            Ok(Cochain::from_real_values(degree, vals))
        }
        "phase" => {
            let mut vals = vec![C64::new(1.0, 0.0); n];
            for (key, v) in &file.values {
                let idx = lookup(key)?;
                let pair = v
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| HoloError::InvalidInput(format!("bad phase value at {key}")))?;
                let re = pair[0].as_f64().unwrap_or(f64::NAN);
                let im = pair[1].as_f64().unwrap_or(f64::NAN);
                vals[idx] = C64::new(re, im);
            }
            Cochain::from_phase_values(degree, vals)
        }
        other => Err(HoloError::InvalidInput(format!("unknown kind {other}"))),
    }
}
