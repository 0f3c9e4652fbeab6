use super::{Directedness, Graph, NodeId};

/// Largest (strongly) connected component with the id mapping retained.
#[derive(Debug, Clone)]
pub struct Component {
    pub graph: Graph,
    /// `old_to_new[old]` is the compacted id, or `None` if `old` was dropped.
    pub old_to_new: Vec<Option<NodeId>>,
    /// `new_to_old[new]` is the original id.
    pub new_to_old: Vec<NodeId>,
}

/// Extracts the largest connected component (undirected) or largest strongly
/// connected component (directed) as an induced subgraph with compacted ids.
///
/// Ties between equally sized components go to the one holding the smallest
/// original node-id. Compacted ids preserve the original relative order.
pub fn largest_component(g: &Graph) -> Component {
    let labels = match g.directedness() {
        Directedness::Undirected => connected_components(g),
        Directedness::Directed => strongly_connected_components(g),
    };
    // Labels are assigned so that iterating nodes in ascending order meets
    // each component first at its smallest member; picking the first label
    // with maximal size implements the tie-break.
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; count];
    let mut first_seen = vec![usize::MAX; count];
    for (u, &c) in labels.iter().enumerate() {
        sizes[c] += 1;
        first_seen[c] = first_seen[c].min(u);
    }
    let best = (0..count)
        .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(first_seen[b].cmp(&first_seen[a])))
        .expect("graph has at least one node");
    induced_subgraph(g, |u| labels[u] == best)
}

fn induced_subgraph(g: &Graph, keep: impl Fn(usize) -> bool) -> Component {
    let n = g.node_count();
    let mut old_to_new = vec![None; n];
    let mut new_to_old = Vec::new();
    for u in 0..n {
        if keep(u) {
            old_to_new[u] = Some(new_to_old.len() as NodeId);
            new_to_old.push(u as NodeId);
        }
    }
    // Old ids are visited in ascending order and the map is monotone, so the
    // relabeled pairs are already sorted.
    let pairs: Vec<(NodeId, NodeId)> = g
        .edges()
        .filter_map(|(u, v)| Some((old_to_new[u as usize]?, old_to_new[v as usize]?)))
        .collect();
    let m = new_to_old.len();
    let graph = match g.directedness() {
        Directedness::Undirected => Graph::from_undirected_sorted(m, &pairs, g.policy()),
        Directedness::Directed => Graph::from_directed_sorted(m, pairs, g.policy()),
    };
    Component {
        graph,
        old_to_new,
        new_to_old,
    }
}

fn connected_components(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut label = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                let v = v as usize;
                if label[v] == usize::MAX {
                    label[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    label
}

/// Iterative Tarjan. Component labels are renumbered afterwards so that
/// label order follows each component's smallest member.
fn strongly_connected_components(g: &Graph) -> Vec<usize> {
    const UNVISITED: usize = usize::MAX;
    let n = g.node_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![UNVISITED; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    // (node, position in its neighbor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (u, ref mut pos)) = call.last_mut() {
            let nbrs = g.neighbors(u);
            if *pos < nbrs.len() {
                let v = nbrs[*pos] as usize;
                *pos += 1;
                if index[v] == UNVISITED {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == index[u] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == u {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }

    let mut relabel = vec![UNVISITED; next_comp];
    let mut fresh = 0;
    for c in comp.iter_mut() {
        if relabel[*c] == UNVISITED {
            relabel[*c] = fresh;
            fresh += 1;
        }
        *c = relabel[*c];
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EdgeList};

    fn build(pairs: &[(u32, u32)], n: usize, d: Directedness) -> Graph {
        let edges = EdgeList::with_node_count(n, pairs.to_vec());
        build_graph(&edges, d).unwrap().0
    }

    #[test]
    fn tie_goes_to_smallest_id() {
        // triangles {1,2,3} and {4,5,6}, isolated node 0
        let g = build(
            &[(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)],
            7,
            Directedness::Undirected,
        );
        let c = largest_component(&g);
        assert_eq!(c.graph.node_count(), 3);
        assert_eq!(c.new_to_old, vec![1, 2, 3]);
        assert_eq!(c.old_to_new[4], None);
        assert_eq!(c.graph.degrees(), vec![2, 2, 2]);
    }

    #[test]
    fn directed_path_gives_singleton() {
        let g = build(&[(0, 1), (1, 2)], 3, Directedness::Directed);
        let c = largest_component(&g);
        assert_eq!(c.graph.node_count(), 1);
        assert_eq!(c.new_to_old, vec![0]);
        assert_eq!(c.graph.edge_count(), 0);
    }

    #[test]
    fn directed_scc_with_tail() {
        // 0 -> 1 <-> 2 <-> 3, 3 -> 4
        let g = build(
            &[(0, 1), (1, 2), (2, 1), (2, 3), (3, 2), (3, 4)],
            5,
            Directedness::Directed,
        );
        let c = largest_component(&g);
        assert_eq!(c.new_to_old, vec![1, 2, 3]);
        assert_eq!(c.graph.edge_count(), 4);
        c.graph.check_invariants().unwrap();
    }

    #[test]
    fn larger_component_wins_over_smaller_id() {
        let g = build(&[(0, 1), (2, 3), (3, 4)], 5, Directedness::Undirected);
        let c = largest_component(&g);
        assert_eq!(c.new_to_old, vec![2, 3, 4]);
    }
}
