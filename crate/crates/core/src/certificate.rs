//! Self-describing JSON certificates: every artifact the CLI emits can be
//! re-validated later from the referenced graph file alone, and every
//! numeric claim is stored as an exact rational.

use crate::bramble::Bramble;
use crate::dedensify::SparseWitnessCertificate;
use crate::graph::Graph;
use crate::minor::{CliqueSubdivisionWitness, MinorModel};
use crate::rational::Rational;
use crate::trim::{Skeleton, TrimSupergraph};
use crate::wall::WallQuasiSubdivisionWitness;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Reproducibility envelope carried by every certificate.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Environment {
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub version: String,
}

impl Environment {
    pub fn new(seed: Option<u64>, budget: Option<u64>) -> Environment {
        Environment { seed, budget, version: env!("CARGO_PKG_VERSION").to_string() }
    }
}

/// The trim structure without its host graph; certificates reference the
/// host by file instead of embedding it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrimStructure {
    pub skeleton: Skeleton,
    pub branch: Vec<usize>,
    #[serde(with = "crate::serde_util::edge_map")]
    pub paths: BTreeMap<(usize, usize), Vec<usize>>,
}

impl TrimStructure {
    pub fn of(t: &TrimSupergraph) -> TrimStructure {
        TrimStructure { skeleton: t.skeleton.clone(), branch: t.branch.clone(), paths: t.paths.clone() }
    }

    pub fn attach(&self, host: Graph) -> TrimSupergraph {
        TrimSupergraph {
            host,
            skeleton: self.skeleton.clone(),
            branch: self.branch.clone(),
            paths: self.paths.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificatePayload {
    /// A (plain or induced) minor model in the referenced host.
    Model { model: MinorModel },
    /// A clique-subdivision (topological minor) witness.
    Subdivision { witness: CliqueSubdivisionWitness },
    /// Trim spanning supergraph structure over the referenced host.
    Trim { structure: TrimStructure },
    /// A bramble with its exact order and a minimum hitting set.
    Bramble { bramble: Bramble, order: usize, hitting_set: Vec<usize> },
    /// An induced wall quasi-subdivision in the referenced host.
    QuasiWall { witness: WallQuasiSubdivisionWitness },
    /// A thinned sparse wall: the host vertex set with its exact claims.
    Thin {
        vertex_set: Vec<usize>,
        target_w: usize,
        eps: Rational,
        column_step: usize,
        vertices: usize,
        edges: usize,
        degree3_positions: usize,
        two_connected: bool,
        wall_model: MinorModel,
    },
    /// The assembled sparse witness over the referenced host.
    Witness {
        host_vertices: Vec<usize>,
        structure: TrimStructure,
        biclique_model: MinorModel,
        certificate: SparseWitnessCertificate,
    },
    /// A structured refusal naming the violated precondition.
    Refusal { reason: String },
}

impl CertificatePayload {
    pub fn kind(&self) -> &'static str {
        match self {
            CertificatePayload::Model { .. } => "model",
            CertificatePayload::Subdivision { .. } => "subdivision",
            CertificatePayload::Trim { .. } => "trim",
            CertificatePayload::Bramble { .. } => "bramble",
            CertificatePayload::QuasiWall { .. } => "quasi_wall",
            CertificatePayload::Thin { .. } => "thin",
            CertificatePayload::Witness { .. } => "witness",
            CertificatePayload::Refusal { .. } => "refusal",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub payload: CertificatePayload,
    pub environment: Environment,
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error("{0}")]
    Invalid(String),
}

/// Re-validates a certificate against its host graph. Every claim is
/// recomputed from scratch; nothing is trusted from the file.
pub fn check_certificate(host: &Graph, cert: &Certificate) -> Result<String, CheckError> {
    let fail = |e: String| CheckError::Invalid(e);
    match &cert.payload {
        CertificatePayload::Model { model } => {
            crate::minor::validate_model(host, model).map_err(|e| fail(e.to_string()))?;
            Ok(format!(
                "valid {} minor model of a {}-vertex pattern",
                if model.induced { "induced" } else { "plain" },
                model.pattern.vertex_count()
            ))
        }
        CertificatePayload::Subdivision { witness } => {
            witness.validate(host).map_err(|e| fail(e.to_string()))?;
            Ok(format!("valid K_{} subdivision witness", witness.s))
        }
        CertificatePayload::Trim { structure } => {
            let t = structure.attach(host.clone());
            let rep = crate::trim::validate_trim(&t).map_err(|e| fail(e.to_string()))?;
            Ok(format!(
                "valid trim supergraph ({} extra edges, min path length {})",
                rep.extra_edges.len(),
                rep.min_path_length
            ))
        }
        CertificatePayload::Bramble { bramble, order, hitting_set } => {
            crate::bramble::validate_bramble(host, bramble).map_err(|e| fail(e.to_string()))?;
            let (exact, _) = crate::bramble::bramble_order(host, bramble).map_err(|e| fail(e.to_string()))?;
            if exact != *order {
                return Err(fail(format!("claimed order {order}, recomputed {exact}")));
            }
            if hitting_set.len() != *order {
                return Err(fail(format!(
                    "hitting set has {} vertices, claimed order {order}",
                    hitting_set.len()
                )));
            }
            for (i, s) in bramble.sets.iter().enumerate() {
                if !s.iter().any(|v| hitting_set.contains(v)) {
                    return Err(fail(format!("stored hitting set misses set {i}")));
                }
            }
            Ok(format!("valid bramble of order {order}"))
        }
        CertificatePayload::QuasiWall { witness } => {
            let rep = crate::wall::validate_wall_quasi_subdivision(host, witness)
                .map_err(|e| fail(e.to_string()))?;
            Ok(format!(
                "valid induced quasi-subdivision of the {0}x{0} wall ({1} triangles)",
                witness.m, rep.triangles
            ))
        }
        CertificatePayload::Thin {
            vertex_set,
            target_w,
            eps,
            vertices,
            edges,
            two_connected,
            wall_model,
            ..
        } => {
            let (sub, _) = host.induced_subgraph(vertex_set).map_err(|e| fail(e.to_string()))?;
            if sub.vertex_count() != *vertices || sub.edge_count() != *edges {
                return Err(fail("vertex/edge counts do not match the induced subgraph".into()));
            }
            if sub.is_two_connected() != *two_connected {
                return Err(fail("2-connectivity claim does not match".into()));
            }
            let bound = crate::treewidth::tw_lower_bound_from_witness(
                &sub,
                crate::treewidth::WitnessKind::Wall { k: *target_w },
                wall_model,
            )
            .map_err(|e| fail(e.to_string()))?;
            let lhs = Rational::from_integer(*edges as i64);
            let rhs = (Rational::one() + *eps) * Rational::from_integer(*vertices as i64);
            if lhs > rhs {
                return Err(fail(format!("density bound fails: {lhs} > {rhs}")));
            }
            Ok(format!(
                "valid thin witness: n={vertices}, |E|={edges} <= (1+{eps})n, tw >= {bound}"
            ))
        }
        CertificatePayload::Witness { host_vertices, structure, biclique_model, certificate } => {
            let (sub, _) = host.induced_subgraph(host_vertices).map_err(|e| fail(e.to_string()))?;
            let t = structure.attach(sub.clone());
            crate::trim::validate_trim(&t).map_err(|e| fail(e.to_string()))?;
            crate::minor::validate_model(&sub, biclique_model).map_err(|e| fail(e.to_string()))?;
            if sub.vertex_count() != certificate.vertices || sub.edge_count() != certificate.edges {
                return Err(fail("vertex/edge counts do not match".into()));
            }
            if sub.is_two_connected() != certificate.two_connected || !certificate.two_connected {
                return Err(fail("2-connectivity claim fails".into()));
            }
            let nv = Rational::from_integer(certificate.vertices as i64);
            let lhs = Rational::from_integer(certificate.edges as i64);
            let rhs = (Rational::one() + certificate.eps) * nv;
            if lhs > rhs {
                return Err(fail(format!("density bound fails: {lhs} > {rhs}")));
            }
            if certificate.treewidth_lower_bound < certificate.target_w {
                return Err(fail("treewidth bound below target".into()));
            }
            Ok(format!(
                "valid sparse witness: n={}, |E|={} <= (1+{})n, tw >= {}",
                certificate.vertices, certificate.edges, certificate.eps, certificate.treewidth_lower_bound
            ))
        }
        CertificatePayload::Refusal { reason } => {
            Ok(format!("refusal certificate: {reason}"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::grid;

    #[test]
    fn model_certificate_roundtrip_and_check() {
        let g = grid(8).unwrap().graph;
        let model = crate::wall::grid_to_wall_model(8).unwrap();
        let cert = Certificate {
            payload: CertificatePayload::Model { model },
            environment: Environment::new(None, None),
        };
        let json = serde_json::to_string_pretty(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        check_certificate(&g, &back).unwrap();
        // Tampered host: validation must fail.
        let small = grid(4).unwrap().graph;
        assert!(check_certificate(&small, &back).is_err());
    }

    #[test]
    fn bramble_certificate_checks_order() {
        let g3 = grid(3).unwrap();
        let b = crate::fixtures::crosses_bramble(&g3);
        let (order, hs) = crate::bramble::bramble_order(&g3.graph, &b).unwrap();
        let cert = Certificate {
            payload: CertificatePayload::Bramble { bramble: b, order, hitting_set: hs },
            environment: Environment::new(None, None),
        };
        check_certificate(&g3.graph, &cert).unwrap();
        let mut tampered = cert.clone();
        if let CertificatePayload::Bramble { order, .. } = &mut tampered.payload {
            *order += 1;
        }
        assert!(check_certificate(&g3.graph, &tampered).is_err());
    }
}
