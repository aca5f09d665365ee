//! Generic implementations of the CLI verbs; instantiated for checked i64
//! and for BigInt by the dispatcher.

use crate::output::Printer;
use crate::{Command, MergeSpec};
use ssework_core::cokernel::{bowen_franks_group, check_diagram, check_matui, unit_class};
use ssework_core::error::{Error, Result};
use ssework_core::graph::{edge_graph, from_matrix, DirectedMultigraph, TransitionMatrix};
use ssework_core::matrix::IntMatrix;
use ssework_core::scalar::Scalar;
use ssework_core::shift::{allowed_words, functions_equal, phi_map, psi_map, shift_compose, CylinderFunction};
use ssework_core::splitting::{find_out_amalgamations, out_amalgamate, out_split, in_split, SplitKind, SplitResult};
use ssework_core::sse::{build_chain, dhat, edge_pairing, search_elementary, verify_chain, verify_elementary, ChainCheck, ElementaryEquivalence, EdgePairing};
use ssework_core::textio;
use ssework_core::transpose_free::{verify_tf_chain, TfChain, TfStep};
use ssework_core::verdict::Verdict;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_matrix<T: Scalar>(path: &Path) -> Result<IntMatrix<T>> {
    textio::parse_matrix(&read_file(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_transition<T: Scalar>(path: &Path) -> Result<TransitionMatrix<T>> {
    TransitionMatrix::new(load_matrix(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Manifest entries resolve relative to the manifest's own directory.
fn resolve(manifest: &Path, entry: &str) -> PathBuf {
    let entry_path = Path::new(entry);
    if entry_path.is_absolute() {
        entry_path.to_path_buf()
    } else {
        manifest.parent().unwrap_or(Path::new(".")).join(entry_path)
    }
}

fn out_vertex_name(old: usize, block: usize) -> String {
    format!("{}^{}", old + 1, block + 1)
}

fn in_vertex_name(old: usize, block: usize) -> String {
    format!("{}_{}", old + 1, block + 1)
}

fn print_split<T: Scalar>(p: &Printer, sr: &SplitResult<T>) {
    p.matrix("split", sr.split_matrix.matrix());
    p.matrix("C", &sr.c);
    p.matrix("D", &sr.d);
    p.matrix("zhat", sr.bipartite.matrix());
    let name = match sr.kind {
        SplitKind::Out => out_vertex_name,
        SplitKind::In => in_vertex_name,
    };
    for (idx, &(old, block)) in sr.vertex_map.iter().enumerate() {
        p.line(
            &format!("VERTEX {} {}", idx + 1, name(old, block)),
            &format!("vertex {} = {}", idx + 1, name(old, block)),
        );
    }
    let split_graph = sr.split_graph();
    let original_graph = from_matrix(&sr.original).expect("original matrix was expanded before");
    for (idx, &(old_edge, sub)) in sr.edge_map.iter().enumerate() {
        let new_label = split_graph.edge(idx).label();
        let old_label = original_graph.edge(old_edge).label();
        p.line(
            &format!("EDGE {new_label} {old_label} {}", sub + 1),
            &format!("edge {new_label} from {old_label} copy {}", sub + 1),
        );
    }
}

fn layer_label(prefix: &str, e: &ssework_core::graph::Edge) -> String {
    format!("{prefix}:{}", e.label())
}

fn print_pairing(p: &Printer, pairing: &EdgePairing) {
    for (i, &(c, d)) in pairing.a_pairs.iter().enumerate() {
        let a_label = pairing.a_graph.edge(i).label();
        let c_label = layer_label("c", &pairing.c_edges[c]);
        let d_label = layer_label("d", &pairing.d_edges[d]);
        p.line(
            &format!("APAIR {a_label} {c_label} {d_label}"),
            &format!("A-edge {a_label} = {c_label} {d_label}"),
        );
    }
    for (l, &(d, c)) in pairing.b_pairs.iter().enumerate() {
        let b_label = pairing.b_graph.edge(l).label();
        let d_label = layer_label("d", &pairing.d_edges[d]);
        let c_label = layer_label("c", &pairing.c_edges[c]);
        p.line(
            &format!("BPAIR {b_label} {d_label} {c_label}"),
            &format!("B-edge {b_label} = {d_label} {c_label}"),
        );
    }
}

fn witness_from_files<T: Scalar>(c: &Path, d: &Path) -> Result<ElementaryEquivalence<T>> {
    let c = load_matrix(c)?;
    let d = load_matrix(d)?;
    ElementaryEquivalence::from_pair(c, d)
}

fn chain_witnesses<T: Scalar>(manifest: &Path) -> Result<Vec<(IntMatrix<T>, IntMatrix<T>)>> {
    let specs = textio::parse_chain_manifest(&read_file(manifest)?)?;
    specs
        .iter()
        .map(|s| {
            Ok((
                load_matrix(&resolve(manifest, &s.c_path))?,
                load_matrix(&resolve(manifest, &s.d_path))?,
            ))
        })
        .collect()
}

pub fn run<T: Scalar>(cmd: &Command, p: &Printer) -> Result<i32> {
    match cmd {
        Command::Bf { matrix } => {
            let a = load_transition::<T>(matrix)?;
            let group = bowen_franks_group(&a);
            p.kv("group", group.render());
            p.kv("unit", unit_class(&group).render());
            Ok(0)
        }

        Command::EdgeGraph { matrix } => {
            let a = load_transition::<T>(matrix)?;
            let fact = edge_graph(&a)?;
            p.kv("edges", fact.graph.num_edges());
            p.matrix("R", &fact.source_incidence);
            p.matrix("S", &fact.target_incidence);
            p.matrix("AG", fact.edge_matrix.matrix());
            Ok(0)
        }

        Command::OutSplit { matrix, partition } => {
            let a = load_transition::<T>(matrix)?;
            let g = from_matrix(&a)?;
            let part = textio::parse_out_partition(&g, &read_file(partition)?)?;
            let sr = out_split::<T>(&g, &part)?;
            print_split(p, &sr);
            Ok(0)
        }

        Command::InSplit { matrix, partition } => {
            let a = load_transition::<T>(matrix)?;
            let g = from_matrix(&a)?;
            let part = textio::parse_in_partition(&g, &read_file(partition)?)?;
            let sr = in_split::<T>(&g, &part)?;
            print_split(p, &sr);
            Ok(0)
        }

        Command::Amalgamate { matrix, merge } => {
            let a = load_transition::<T>(matrix)?;
            match merge {
                None => {
                    let candidates = find_out_amalgamations(&a)?;
                    p.kv("candidates", candidates.len());
                    for set in candidates {
                        let rendered: Vec<String> =
                            set.iter().map(|v| (v + 1).to_string()).collect();
                        p.line(
                            &format!("CANDIDATE {}", rendered.join(",")),
                            &format!("candidate {{{}}}", rendered.join(",")),
                        );
                    }
                    Ok(0)
                }
                Some(MergeSpec(set)) => {
                    let g = from_matrix(&a)?;
                    let zero_based: Vec<usize> =
                        set.iter().map(|&v| v.checked_sub(1).unwrap_or(usize::MAX)).collect();
                    let am = out_amalgamate::<T>(&g, &zero_based)?;
                    p.matrix("merged", am.merged_matrix.matrix());
                    let rendered = textio::render_out_partition(&am.merged_graph, &am.partition);
                    for line in rendered.lines() {
                        p.line(&format!("PARTITION {line}"), &format!("partition {line}"));
                    }
                    let relabel: Vec<String> =
                        am.relabeling.iter().map(|v| (v + 1).to_string()).collect();
                    p.kv("relabel", relabel.join(" "));
                    Ok(0)
                }
            }
        }

        Command::VerifyEe { a, b, c, d } => {
            let a = load_transition::<T>(a)?;
            let b = load_transition::<T>(b)?;
            let c = load_matrix::<T>(c)?;
            let d = load_matrix::<T>(d)?;
            let verdict = verify_elementary(&a, &b, &c, &d)?;
            Ok(p.verdict(&verdict))
        }

        Command::VerifyChain { manifest } => {
            let witnesses = chain_witnesses::<T>(manifest)?;
            p.kv("steps", witnesses.len());
            let verdict = verify_chain(&witnesses)?;
            if let ChainCheck::Verified(chain) = build_chain(&witnesses)? {
                p.matrix("start", chain.start().matrix());
                p.matrix("end", chain.end().matrix());
            }
            Ok(p.verdict(&verdict))
        }

        Command::Dhat { c, d } => {
            let ee = witness_from_files::<T>(c, d)?;
            p.matrix("A", ee.a().matrix());
            p.matrix("B", ee.b().matrix());
            let pairing = edge_pairing(&ee)?;
            let dh: IntMatrix<T> = dhat(&pairing);
            p.matrix("dhat", &dh);
            print_pairing(p, &pairing);
            Ok(0)
        }

        Command::Diagram { manifest } => {
            let witnesses = chain_witnesses::<T>(manifest)?;
            match build_chain(&witnesses)? {
                ChainCheck::Refuted { step, locus } => {
                    Ok(p.verdict(&Verdict::refuted(format!("step {step} {locus}"))))
                }
                ChainCheck::Verified(chain) => {
                    p.kv("steps", chain.len());
                    p.matrix("forward-product", &chain.forward_matrix()?);
                    let verdict = check_diagram(&chain)?;
                    Ok(p.verdict(&verdict))
                }
            }
        }

        Command::Matui { c, d } => {
            let ee = witness_from_files::<T>(c, d)?;
            let verdict = check_matui(&ee)?;
            Ok(p.verdict(&verdict))
        }

        Command::SearchEe {
            a,
            b,
            bound,
            max_candidates,
        } => {
            let a = load_transition::<T>(a)?;
            let b = load_transition::<T>(b)?;
            let found = search_elementary(&a, &b, *bound, *max_candidates)?;
            p.kv("found", found.len());
            for (i, ee) in found.iter().enumerate() {
                p.line(&format!("WITNESS {}", i + 1), &format!("witness {}", i + 1));
                p.matrix("C", ee.c());
                p.matrix("D", ee.d());
            }
            Ok(0)
        }

        Command::Traces { matrix, n } => {
            let a = load_transition::<T>(matrix)?;
            let traces = a.trace_sequence(*n)?;
            let rendered: Vec<String> = traces.iter().map(ToString::to_string).collect();
            p.kv("traces", rendered.join(" "));
            Ok(0)
        }

        Command::PhiPsiCheck {
            c,
            d,
            depth,
            max_words,
        } => {
            let ee = witness_from_files::<T>(c, d)?;
            let pairing = edge_pairing(&ee)?;
            let mut checked = 0u64;
            for k in 0..=*depth {
                for forward in [true, false] {
                    let graph = if forward {
                        &pairing.a_graph
                    } else {
                        &pairing.b_graph
                    };
                    let words = allowed_words(graph, k, *max_words)?;
                    if words.len() > 20 {
                        return Err(Error::ExplosionGuard {
                            count: 1u128 << words.len().min(127),
                            cap: 1 << 20,
                        });
                    }
                    for mask in 0u64..(1u64 << words.len()) {
                        let mut values = BTreeMap::new();
                        for (i, w) in words.iter().enumerate() {
                            values.insert(w.clone(), ((mask >> i) & 1) as i64);
                        }
                        let f = CylinderFunction::new(graph, k, values, *max_words)?;
                        let (round, shifted) = if forward {
                            (
                                psi_map(&pairing, &phi_map(&pairing, &f, *max_words)?, *max_words)?,
                                shift_compose(&f, graph, *max_words)?,
                            )
                        } else {
                            (
                                phi_map(&pairing, &psi_map(&pairing, &f, *max_words)?, *max_words)?,
                                shift_compose(&f, graph, *max_words)?,
                            )
                        };
                        if !functions_equal(graph, &round, &shifted, *max_words)? {
                            let side = if forward { "A" } else { "B" };
                            let verdict = Verdict::refuted(format!(
                                "transfer law fails on side {side} at depth {k} for the 0/1 \
                                 function with mask {mask}"
                            ));
                            return Ok(p.verdict(&verdict));
                        }
                        checked += 1;
                    }
                }
            }
            p.kv("functions", checked);
            Ok(p.verdict(&Verdict::verified()))
        }

        Command::TfVerify { manifest } => {
            let specs = textio::parse_tf_manifest(&read_file(manifest)?)?;
            let mut steps = Vec::new();
            for spec in &specs {
                let base = load_transition::<T>(&resolve(manifest, &spec.matrix_path))?;
                let g = from_matrix(&base)?;
                let part = textio::parse_out_partition(
                    &g,
                    &read_file(&resolve(manifest, &spec.partition_path))?,
                )?;
                let witness = out_split::<T>(&g, &part)?;
                steps.push(TfStep::new(spec.side, spec.mv, witness)?);
            }
            describe_tf_endpoints(p, &steps);
            let chain = TfChain { steps };
            let (verdict, implied) = verify_tf_chain(&chain)?;
            if let Some(sse) = implied {
                p.kv("implied-chain-steps", sse.len());
                let start = sse.start();
                let end = sse.end();
                p.kv("bf-start", bowen_franks_group(start).render());
                p.kv("bf-end", bowen_franks_group(end).render());
                p.kv(
                    "bf-start-transposed",
                    bowen_franks_group(&start.transpose()).render(),
                );
                p.kv(
                    "bf-end-transposed",
                    bowen_franks_group(&end.transpose()).render(),
                );
            }
            Ok(p.verdict(&verdict))
        }
    }
}

fn describe_tf_endpoints<T: Scalar>(p: &Printer, steps: &[TfStep<T>]) {
    for (i, step) in steps.iter().enumerate() {
        p.line(
            &format!(
                "STEP {} {} {} {}x{}->{}x{}",
                i + 1,
                step.side,
                step.mv,
                step.from.dim(),
                step.from.dim(),
                step.to.dim(),
                step.to.dim()
            ),
            &format!(
                "step {}: {} {} from {}x{} to {}x{}",
                i + 1,
                step.side,
                step.mv,
                step.from.dim(),
                step.from.dim(),
                step.to.dim(),
                step.to.dim()
            ),
        );
    }
}
