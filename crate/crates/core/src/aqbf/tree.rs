use super::AqbfParams;
use crate::geometry::{
    classify_cell_vs_circle, classify_cell_vs_polygon, point_in_polygon, segment_meets_open_rect, Cell, RegionClass,
    Scene,
};
use rayon::prelude::*;

/// Depth at which subdivision may fork across worker threads.
const PARALLEL_DEPTH: u32 = 3;

/// Node of the adaptive quadtree.
#[derive(Debug, Clone)]
pub struct QuadNode {
    pub cell: Cell,
    pub class: RegionClass,
    pub depth: u32,
    /// `1` for the root; a child appends its quadrant index as two bits.
    pub path: u64,
    /// Quadrants in SW, SE, NW, NE order.
    pub children: Option<Box<[QuadNode; 4]>>,
}

/// Flattened leaf of a [`QuadNode`] tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leaf {
    pub cell: Cell,
    pub class: RegionClass,
    pub depth: u32,
    pub path: u64,
}

impl QuadNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    /// Leaves in depth-first quadrant order.
    pub fn leaves(&self) -> Vec<Leaf> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Leaf>) {
        match &self.children {
            Some(ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
            None => out.push(Leaf { cell: self.cell, class: self.class, depth: self.depth, path: self.path }),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.as_ref().map_or(0, |ch| ch.iter().map(QuadNode::node_count).sum())
    }

    pub fn max_depth(&self) -> u32 {
        self.children
            .as_ref()
            .map_or(self.depth, |ch| ch.iter().map(QuadNode::max_depth).max().unwrap_or(self.depth))
    }
}

/// Classification of a cell against the covered region from scratch.
///
/// EXTERIOR when the cell misses the polygon or lies outside every circle,
/// INTERIOR when it lies inside the polygon and inside at least one circle,
/// BOUNDARY otherwise. Both tests are conservative, so an INTERIOR cell is
/// always covered and an EXTERIOR cell never overlaps the region's interior.
pub fn classify_cell(cell: &Cell, scene: &Scene) -> RegionClass {
    let poly = classify_cell_vs_polygon(cell, &scene.polygon);
    if poly == RegionClass::Outside {
        return RegionClass::Outside;
    }
    let mut any_inside = false;
    let mut any_boundary = false;
    for c in &scene.circles {
        match classify_cell_vs_circle(cell, c) {
            RegionClass::Inside => any_inside = true,
            RegionClass::Boundary => any_boundary = true,
            RegionClass::Outside => {}
        }
    }
    match (poly, any_inside, any_boundary) {
        (_, false, false) => RegionClass::Outside,
        (RegionClass::Inside, true, _) => RegionClass::Inside,
        _ => RegionClass::Boundary,
    }
}

/// Root square: side equal to the polygon diameter, anchored at the lower-left
/// corner of the polygon bounding box clipped to the circles' bounding box.
/// That clipped box contains the whole covered region and has no side longer
/// than the diameter.
pub fn root_cell(scene: &Scene) -> Cell {
    let anchor = scene.region_box().unwrap_or_else(|| scene.polygon.bbox());
    Cell::square(anchor.x_min, anchor.y_min, scene.polygon.diameter())
}

/// Smallest `d` with `2^{-d} ≤ √ε`: the depth at which a root of side `L`
/// reaches the threshold `δ = √ε · L`.
pub fn depth_limit(epsilon_partition: f64) -> u32 {
    let delta = epsilon_partition.sqrt() * (1.0 + 1e-12);
    let mut d = 0;
    let mut side = 1.0f64;
    while side > delta {
        side *= 0.5;
        d += 1;
    }
    d
}

#[derive(Clone)]
enum PolyState {
    Inside,
    Outside,
    /// Indices of edges passing through the cell.
    Crossing(Vec<u32>),
}

#[derive(Clone)]
struct State {
    poly: PolyState,
    /// Some circle contains the whole cell.
    covered: bool,
    /// Circles whose boundary crosses the cell; empty once `covered`.
    crossing: Vec<u32>,
}

impl State {
    fn class(&self) -> RegionClass {
        match (&self.poly, self.covered, self.crossing.is_empty()) {
            (PolyState::Outside, _, _) => RegionClass::Outside,
            (_, false, true) => RegionClass::Outside,
            (PolyState::Inside, true, _) => RegionClass::Inside,
            _ => RegionClass::Boundary,
        }
    }
}

fn refine(state: &State, cell: &Cell, scene: &Scene) -> State {
    let rect = cell.as_rect();
    let poly = match &state.poly {
        PolyState::Crossing(edges) => {
            let touching: Vec<u32> = edges
                .iter()
                .copied()
                .filter(|&i| {
                    let (a, b) = scene.polygon.edge(i as usize);
                    segment_meets_open_rect(a, b, &rect)
                })
                .collect();
            if !touching.is_empty() {
                PolyState::Crossing(touching)
            } else if point_in_polygon(cell.center(), &scene.polygon) {
                PolyState::Inside
            } else {
                PolyState::Outside
            }
        }
        other => other.clone(),
    };
    if state.covered {
        return State { poly, covered: true, crossing: Vec::new() };
    }
    let mut crossing = Vec::new();
    for &k in &state.crossing {
        match classify_cell_vs_circle(cell, &scene.circles[k as usize]) {
            RegionClass::Inside => return State { poly, covered: true, crossing: Vec::new() },
            RegionClass::Boundary => crossing.push(k),
            RegionClass::Outside => {}
        }
    }
    State { poly, covered: false, crossing }
}

fn build(cell: Cell, state: State, depth: u32, path: u64, dmax: u32, scene: &Scene) -> QuadNode {
    let class = state.class();
    if class != RegionClass::Boundary || depth >= dmax {
        return QuadNode { cell, class, depth, path, children: None };
    }
    let child = |(q, c): (usize, &Cell)| {
        let s = refine(&state, c, scene);
        build(*c, s, depth + 1, (path << 2) | q as u64, dmax, scene)
    };
    let cells = cell.children();
    let nodes: Vec<QuadNode> = if depth < PARALLEL_DEPTH {
        cells.par_iter().enumerate().map(child).collect()
    } else {
        cells.iter().enumerate().map(child).collect()
    };
    let children: Box<[QuadNode; 4]> = nodes.into_boxed_slice().try_into().expect("four quadrants");
    QuadNode { cell, class, depth, path, children: Some(children) }
}

/// Adaptive quadtree over the scene. BOUNDARY cells are split until their
/// side reaches `√ε_partition · L`, where `L` is the polygon diameter; INTERIOR
/// and EXTERIOR cells are never split. Each node is classified once, with the
/// parent's touching edges and crossing circles narrowing the work.
pub fn partition(scene: &Scene, params: &AqbfParams) -> QuadNode {
    let root = root_cell(scene);
    let all_edges = (0..scene.polygon.len() as u32).collect();
    let seed = State {
        poly: PolyState::Crossing(all_edges),
        covered: false,
        crossing: (0..scene.circles.len() as u32).collect(),
    };
    let state = refine(&seed, &root, scene);
    build(root, state, 0, 1, depth_limit(params.epsilon_partition), scene)
}
