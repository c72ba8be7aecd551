//! Graphviz output. The drawings are combinatorial: they show incidences and
//! types, not an embedding faithful to the genus.

use std::fmt::Write;

use crate::maps::{Arborescence, Constellation, HalfEdgeMap, VertexColor};

const SHAPES: [&str; 6] = ["circle", "box", "diamond", "triangle", "pentagon", "hexagon"];
const PALETTE: [&str; 8] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
];

/// Hyperedges are drawn as gray hub nodes with a k-gon of edges around them;
/// tree edges, if given, are drawn bold.
pub fn constellation_to_dot(c: &Constellation, tree: Option<&Arborescence>) -> String {
    let mut out = String::new();
    let k = c.k();
    writeln!(out, "graph constellation {{").unwrap();
    writeln!(out, "  node [style=filled, fontsize=10];").unwrap();
    for v in 0..c.vertex_count() {
        let t = c.vertex_type(v);
        let mut label = format!("t{}", t + 1);
        if let Some(l) = c.labels() {
            write!(label, " #{}", l[v] + 1).unwrap();
        }
        let fill = c.colors().map_or("white", |col| PALETTE[col[v] % PALETTE.len()]);
        let root = if c.root_vertex() == Some(v) { ", penwidth=3" } else { "" };
        writeln!(
            out,
            "  v{} [label=\"{}\", shape={}, fillcolor=\"{}\"{}];",
            v + 1,
            label,
            SHAPES[t % SHAPES.len()],
            fill,
            root
        )
        .unwrap();
    }
    for h in 0..c.n() {
        let shade = if c.root() == Some(h) { "gray40" } else { "gray80" };
        writeln!(out, "  h{} [label=\"{}\", shape=point, width=0.15, fillcolor={}];", h + 1, h + 1, shade).unwrap();
        for t in 0..k {
            let (a, b) = c.edge_endpoints(h, t);
            let bold = tree.is_some_and(|tr| tr.contains_edge(c, h, t));
            let style = if bold { ", penwidth=3" } else { "" };
            writeln!(out, "  v{} -- v{} [label=\"{}\"{}];", a + 1, b + 1, t + 1, style).unwrap();
            writeln!(out, "  h{} -- v{} [style=dotted];", h + 1, a + 1).unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

/// Black and white vertices, typed edges, and buds drawn as arrow stubs.
pub fn half_edge_map_to_dot(m: &HalfEdgeMap, root: Option<usize>) -> String {
    let mut out = String::new();
    writeln!(out, "graph halfedges {{").unwrap();
    writeln!(out, "  node [style=filled, fontsize=10];").unwrap();
    for (v, col) in m.vertex_colors().iter().enumerate() {
        let (fill, font) = match col {
            VertexColor::Black => ("black", "white"),
            VertexColor::White => ("white", "black"),
        };
        let extra = if root == Some(v) { ", color=gray50, penwidth=4" } else { "" };
        writeln!(
            out,
            "  u{v} [label=\"{}\", shape=circle, fillcolor={fill}, fontcolor={font}{extra}];",
            v + 1
        )
        .unwrap();
    }
    for (h, he) in m.half_edges().iter().enumerate() {
        match he.twin {
            Some(tw) if tw > h => {
                let other = m.half_edge(tw);
                writeln!(out, "  u{} -- u{} [label=\"{}\"];", he.vertex, other.vertex, he.ty + 1).unwrap();
            }
            Some(_) => {}
            None => {
                writeln!(out, "  b{h} [shape=point, width=0.05];").unwrap();
                writeln!(out, "  u{} -- b{h} [label=\"{}\", dir=forward, style=dashed];", he.vertex, he.ty + 1)
                    .unwrap();
            }
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    #[test]
    fn dot_output_is_stable_and_complete() {
        let p = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let c = Constellation::from_permutations(&[p, Permutation::long_cycle(3)]).unwrap().with_root(0).unwrap();
        let a = constellation_to_dot(&c, None);
        assert_eq!(a, constellation_to_dot(&c, None));
        assert!(a.starts_with("graph constellation {"));
        assert_eq!(a.matches(" -- v").count(), 2 * c.n() * c.k());
        let d = half_edge_map_to_dot(&HalfEdgeMap::dual(&c), Some(0));
        assert_eq!(d.matches("shape=circle").count(), HalfEdgeMap::dual(&c).vertex_count());
    }
}
