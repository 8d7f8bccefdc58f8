//! PNML place/transition net reading and writing.
//!
//! The reader accepts the PNML core model with or without `<page>`
//! wrappers and ignores XML namespaces. Transitions with a missing or
//! empty name, or the `$invisible$` marker, are silent. The final marking
//! comes from a `<finalmarkings>` element; when absent, a unique sink
//! place (no outgoing arcs) with one token is assumed, and anything else
//! is an error.

use std::path::Path;

use crate::conformance::{Marking, PetriNet, Place, Transition};
use crate::error::{CoreError, Result};

fn parse_err(file: &str, msg: impl Into<String>) -> CoreError {
    CoreError::PnmlParse {
        file: file.to_string(),
        msg: msg.into(),
    }
}

pub fn read_pnml(path: impl AsRef<Path>) -> Result<PetriNet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CoreError::io(path, e))?;
    read_pnml_str(&text, &path.display().to_string())
}

pub fn read_pnml_str(text: &str, file: &str) -> Result<PetriNet> {
    let doc = roxmltree::Document::parse(text).map_err(|e| parse_err(file, e.to_string()))?;
    let net_node = doc
        .descendants()
        .find(|n| n.has_tag_name("net"))
        .ok_or_else(|| parse_err(file, "no <net> element"))?;
    let name = net_node.attribute("id").unwrap_or("net").to_string();

    fn in_final_markings(node: roxmltree::Node) -> bool {
        node.ancestors().any(|a| a.has_tag_name("finalmarkings"))
    }

    let text_of = |node: roxmltree::Node| -> Option<String> {
        node.children()
            .find(|c| c.has_tag_name("text"))
            .and_then(|t| t.text())
            .map(str::to_string)
    };

    let mut places: Vec<Place> = Vec::new();
    let mut initial_counts: Vec<u32> = Vec::new();
    for p in net_node
        .descendants()
        .filter(|n| n.has_tag_name("place") && !in_final_markings(*n))
    {
        let id = p
            .attribute("id")
            .ok_or_else(|| parse_err(file, "place without id"))?;
        let tokens = p
            .children()
            .find(|c| c.has_tag_name("initialMarking"))
            .and_then(text_of)
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| parse_err(file, format!("bad initial marking on {id}")))
            })
            .transpose()?
            .unwrap_or(0);
        places.push(Place { id: id.to_string() });
        initial_counts.push(tokens);
    }

    let mut transitions: Vec<Transition> = Vec::new();
    for t in net_node
        .descendants()
        .filter(|n| n.has_tag_name("transition"))
    {
        let id = t
            .attribute("id")
            .ok_or_else(|| parse_err(file, "transition without id"))?;
        let label = t
            .children()
            .find(|c| c.has_tag_name("name"))
            .and_then(text_of)
            .filter(|l| !l.trim().is_empty() && l.trim() != "$invisible$")
            .map(|l| l.trim().to_string());
        let silent_flag = t.descendants().any(|n| {
            n.has_tag_name("toolspecific")
                && n.attribute("activity").is_some_and(|a| a == "$invisible$")
        });
        transitions.push(Transition {
            id: id.to_string(),
            label: if silent_flag { None } else { label },
            inputs: Vec::new(),
            outputs: Vec::new(),
        });
    }

    let place_idx: std::collections::HashMap<String, usize> = places
        .iter()
        .enumerate()
        .map(|(i, p)| (p.id.clone(), i))
        .collect();
    let transition_idx: std::collections::HashMap<String, usize> = transitions
        .iter()
        .enumerate()
        .map(|(i, t)| (t.id.clone(), i))
        .collect();
    let place_idx = |id: &str| place_idx.get(id).copied();
    let transition_idx = |id: &str| transition_idx.get(id).copied();

    for arc in net_node.descendants().filter(|n| n.has_tag_name("arc")) {
        let source = arc
            .attribute("source")
            .ok_or_else(|| parse_err(file, "arc without source"))?;
        let target = arc
            .attribute("target")
            .ok_or_else(|| parse_err(file, "arc without target"))?;
        if let Some(w) = arc
            .children()
            .find(|c| c.has_tag_name("inscription"))
            .and_then(text_of)
        {
            if w.trim() != "1" {
                return Err(parse_err(file, format!("weighted arc {source}->{target}")));
            }
        }
        match (place_idx(source), transition_idx(target)) {
            (Some(p), Some(t)) => transitions[t].inputs.push(p),
            _ => match (transition_idx(source), place_idx(target)) {
                (Some(t), Some(p)) => transitions[t].outputs.push(p),
                _ => {
                    return Err(parse_err(
                        file,
                        format!("arc references unknown node: {source} -> {target}"),
                    ))
                }
            },
        }
    }
    for t in &mut transitions {
        t.inputs.sort_unstable();
        t.outputs.sort_unstable();
    }

    let mut initial = Marking::empty(places.len());
    for (i, &c) in initial_counts.iter().enumerate() {
        initial.set(i, c);
    }

    let final_markings: Vec<roxmltree::Node> = net_node
        .descendants()
        .filter(|n| n.has_tag_name("finalmarkings"))
        .flat_map(|fm| fm.children().filter(|c| c.has_tag_name("marking")))
        .collect();
    let final_marking = match final_markings.len() {
        0 => {
            // Fallback: unique place with no outgoing arcs gets one token.
            let sinks: Vec<usize> = (0..places.len())
                .filter(|&p| transitions.iter().all(|t| !t.inputs.contains(&p)))
                .collect();
            if sinks.len() != 1 {
                return Err(CoreError::FinalMarkingUndefined);
            }
            let mut m = Marking::empty(places.len());
            m.set(sinks[0], 1);
            m
        }
        1 => {
            let mut m = Marking::empty(places.len());
            for entry in final_markings[0]
                .children()
                .filter(|c| c.has_tag_name("place"))
            {
                let idref = entry
                    .attribute("idref")
                    .ok_or_else(|| parse_err(file, "final marking place without idref"))?;
                let p = place_idx(idref).ok_or_else(|| {
                    parse_err(file, format!("final marking references unknown place {idref}"))
                })?;
                let count = text_of(entry)
                    .map(|t| {
                        t.trim()
                            .parse::<u32>()
                            .map_err(|_| parse_err(file, "bad final marking count"))
                    })
                    .transpose()?
                    .unwrap_or(1);
                m.set(p, count);
            }
            m
        }
        _ => return Err(parse_err(file, "multiple final markings unsupported")),
    };

    if transitions.is_empty() {
        return Err(parse_err(file, "net has no transitions"));
    }

    // Reassemble through the builder to reuse its invariant checks.
    let mut b = crate::conformance::PetriNetBuilder::new(&name);
    for p in &places {
        b.place(&p.id);
    }
    for (i, t) in transitions.iter().enumerate() {
        let idx = b.transition(&t.id, t.label.as_deref());
        debug_assert_eq!(idx, i);
        for &p in &t.inputs {
            b.arc_pt(p, idx);
        }
        for &p in &t.outputs {
            b.arc_tp(idx, p);
        }
    }
    for (p, &c) in initial.counts().iter().enumerate() {
        for _ in 0..c {
            b.initial_token(p);
        }
    }
    for (p, &c) in final_marking.counts().iter().enumerate() {
        for _ in 0..c {
            b.final_token(p);
        }
    }
    b.build()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn write_pnml_string(net: &PetriNet) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n");
    out.push_str(&format!(
        "  <net id=\"{}\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n",
        escape(&net.name)
    ));
    out.push_str("    <page id=\"page1\">\n");
    for (i, p) in net.places().iter().enumerate() {
        out.push_str(&format!("      <place id=\"{}\">\n", escape(&p.id)));
        let tokens = net.initial_marking().tokens(i);
        if tokens > 0 {
            out.push_str(&format!(
                "        <initialMarking><text>{tokens}</text></initialMarking>\n"
            ));
        }
        out.push_str("      </place>\n");
    }
    for t in net.transitions() {
        match &t.label {
            Some(label) => out.push_str(&format!(
                "      <transition id=\"{}\">\n        <name><text>{}</text></name>\n      </transition>\n",
                escape(&t.id),
                escape(label)
            )),
            None => out.push_str(&format!(
                "      <transition id=\"{}\"/>\n",
                escape(&t.id)
            )),
        }
    }
    let mut arc_id = 0usize;
    for t in net.transitions() {
        for &p in &t.inputs {
            out.push_str(&format!(
                "      <arc id=\"a{arc_id}\" source=\"{}\" target=\"{}\"/>\n",
                escape(&net.places()[p].id),
                escape(&t.id)
            ));
            arc_id += 1;
        }
        for &p in &t.outputs {
            out.push_str(&format!(
                "      <arc id=\"a{arc_id}\" source=\"{}\" target=\"{}\"/>\n",
                escape(&t.id),
                escape(&net.places()[p].id)
            ));
            arc_id += 1;
        }
    }
    out.push_str("    </page>\n");
    out.push_str("    <finalmarkings>\n      <marking>\n");
    for (i, &c) in net.final_marking().counts().iter().enumerate() {
        if c > 0 {
            out.push_str(&format!(
                "        <place idref=\"{}\"><text>{c}</text></place>\n",
                escape(&net.places()[i].id)
            ));
        }
    }
    out.push_str("      </marking>\n    </finalmarkings>\n");
    out.push_str("  </net>\n</pnml>\n");
    out
}

pub fn write_pnml(path: impl AsRef<Path>, net: &PetriNet) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_pnml_string(net)).map_err(|e| CoreError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformance::{sequence_net, PetriNetBuilder};

    #[test]
    fn minimal_net_fires_its_single_label() {
        let xml = r#"<?xml version="1.0"?>
<pnml><net id="n"><page id="pg">
  <place id="p0"><initialMarking><text>1</text></initialMarking></place>
  <place id="p1"/>
  <transition id="t"><name><text>a</text></name></transition>
  <arc id="a1" source="p0" target="t"/>
  <arc id="a2" source="t" target="p1"/>
</page></net></pnml>"#;
        let net = read_pnml_str(xml, "test").unwrap();
        assert_eq!(net.places().len(), 2);
        assert_eq!(net.transitions().len(), 1);
        assert_eq!(net.transitions()[0].label.as_deref(), Some("a"));
        // Final marking from the unique-sink fallback.
        assert_eq!(net.final_marking().tokens(1), 1);
        let after = net.fire(net.initial_marking(), 0).unwrap();
        assert_eq!(after, *net.final_marking());
    }

    #[test]
    fn empty_and_invisible_names_are_silent() {
        let xml = r#"<pnml><net id="n">
  <place id="p0"><initialMarking><text>1</text></initialMarking></place>
  <place id="p1"/>
  <transition id="t0"><name><text>$invisible$</text></name></transition>
  <transition id="t1"><name><text>  </text></name></transition>
  <transition id="t2"/>
  <arc id="a1" source="p0" target="t0"/>
  <arc id="a2" source="t0" target="p1"/>
  <arc id="a3" source="p0" target="t1"/>
  <arc id="a4" source="t1" target="p1"/>
  <arc id="a5" source="p0" target="t2"/>
  <arc id="a6" source="t2" target="p1"/>
</net></pnml>"#;
        let net = read_pnml_str(xml, "test").unwrap();
        assert!(net.transitions().iter().all(Transition::is_silent));
    }

    #[test]
    fn toolspecific_invisible_flag_silences_named_transition() {
        let xml = r#"<pnml><net id="n">
  <place id="p0"><initialMarking><text>1</text></initialMarking></place>
  <place id="p1"/>
  <transition id="t0"><name><text>skip</text></name>
    <toolspecific tool="ProM" version="6.4" activity="$invisible$"/>
  </transition>
  <arc id="a1" source="p0" target="t0"/>
  <arc id="a2" source="t0" target="p1"/>
</net></pnml>"#;
        let net = read_pnml_str(xml, "test").unwrap();
        assert!(net.transitions()[0].is_silent());
    }

    #[test]
    fn arc_to_unknown_node_errors() {
        let xml = r#"<pnml><net id="n">
  <place id="p0"/>
  <transition id="t"><name><text>a</text></name></transition>
  <arc id="a1" source="p0" target="nope"/>
</net></pnml>"#;
        assert!(matches!(
            read_pnml_str(xml, "test"),
            Err(CoreError::PnmlParse { .. })
        ));
    }

    #[test]
    fn ambiguous_final_marking_errors() {
        // Two sinks, no <finalmarkings>.
        let xml = r#"<pnml><net id="n">
  <place id="p0"><initialMarking><text>1</text></initialMarking></place>
  <place id="p1"/>
  <place id="p2"/>
  <transition id="t0"><name><text>a</text></name></transition>
  <transition id="t1"><name><text>b</text></name></transition>
  <arc id="a1" source="p0" target="t0"/>
  <arc id="a2" source="t0" target="p1"/>
  <arc id="a3" source="p0" target="t1"/>
  <arc id="a4" source="t1" target="p2"/>
</net></pnml>"#;
        assert!(matches!(
            read_pnml_str(xml, "test"),
            Err(CoreError::FinalMarkingUndefined)
        ));
    }

    #[test]
    fn explicit_final_markings_element_wins() {
        let xml = r#"<pnml><net id="n">
  <place id="p0"><initialMarking><text>1</text></initialMarking></place>
  <place id="p1"/>
  <place id="p2"/>
  <transition id="t0"><name><text>a</text></name></transition>
  <transition id="t1"><name><text>b</text></name></transition>
  <arc id="a1" source="p0" target="t0"/>
  <arc id="a2" source="t0" target="p1"/>
  <arc id="a3" source="p0" target="t1"/>
  <arc id="a4" source="t1" target="p2"/>
  <finalmarkings><marking><place idref="p1"><text>1</text></place></marking></finalmarkings>
</net></pnml>"#;
        let net = read_pnml_str(xml, "test").unwrap();
        assert_eq!(net.final_marking().tokens(1), 1);
        assert_eq!(net.final_marking().tokens(2), 0);
    }

    #[test]
    fn weighted_arcs_are_rejected() {
        let xml = r#"<pnml><net id="n">
  <place id="p0"><initialMarking><text>1</text></initialMarking></place>
  <place id="p1"/>
  <transition id="t"><name><text>a</text></name></transition>
  <arc id="a1" source="p0" target="t"><inscription><text>2</text></inscription></arc>
  <arc id="a2" source="t" target="p1"/>
</net></pnml>"#;
        assert!(matches!(
            read_pnml_str(xml, "test"),
            Err(CoreError::PnmlParse { .. })
        ));
    }

    #[test]
    fn round_trip_is_isomorphic() {
        let mut b = PetriNetBuilder::new("rt");
        let p0 = b.place("p0");
        let p1 = b.place("p1");
        let p2 = b.place("p2");
        let p3 = b.place("p3");
        let ta = b.transition("ta", Some("a <&> b"));
        let tau = b.transition("tau", None);
        let tb = b.transition("tb", Some("b"));
        b.arc_pt(p0, ta).arc_tp(ta, p1).arc_tp(ta, p2);
        b.arc_pt(p1, tau).arc_tp(tau, p3);
        b.arc_pt(p2, tb).arc_pt(p3, tb).arc_tp(tb, p0);
        b.initial_token(p0).final_token(p0);
        let net = b.build().unwrap();

        let text = write_pnml_string(&net);
        let back = read_pnml_str(&text, "roundtrip").unwrap();
        assert_eq!(net, back);
        // And a second serialization is byte-identical.
        assert_eq!(text, write_pnml_string(&back));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.pnml");
        let net = sequence_net("seq", &["a", "b", "c"]).unwrap();
        write_pnml(&path, &net).unwrap();
        let back = read_pnml(&path).unwrap();
        assert_eq!(net, back);
    }
}
