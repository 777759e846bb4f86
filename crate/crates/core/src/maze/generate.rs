use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EnvConfig, Heading, MazeGraph, NodeId};

const UNIT_MM: u32 = 50;

/// Randomized depth-first spanning tree over a `width` x `height` node grid.
///
/// The DFS starts in the north-west corner. `S` is the first dead end the
/// walk reaches, `E` the node farthest from `S` in the tree (lowest id on
/// ties). Nodes sit two map characters apart, so every segment is one cell.
/// Returns `None` if either dimension is below 2.
pub fn generate_maze(width: usize, height: usize, seed: u64) -> Option<MazeGraph> {
    if width < 2 || height < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = |x: usize, y: usize| NodeId(y * width + x);
    let count = width * height;

    let mut visited = vec![false; count];
    let mut edges = Vec::with_capacity(count - 1);
    let mut first_dead_end = None;
    let mut stack = vec![(0usize, 0usize)];
    visited[0] = true;

    while let Some(&(x, y)) = stack.last() {
        let options: Vec<(usize, usize)> = Heading::ALL
            .into_iter()
            .filter_map(|h| {
                let (dr, dc) = h.delta();
                let nx = x.checked_add_signed(dc)?;
                let ny = y.checked_add_signed(dr)?;
                (nx < width && ny < height && !visited[id(nx, ny).0]).then_some((nx, ny))
            })
            .collect();
        if options.is_empty() {
            first_dead_end.get_or_insert(id(x, y));
            stack.pop();
            continue;
        }
        let (nx, ny) = options[rng.gen_range(0..options.len())];
        visited[id(nx, ny).0] = true;
        edges.push((id(x, y), id(nx, ny), 1));
        stack.push((nx, ny));
    }

    let positions: Vec<(usize, usize)> = (0..height)
        .flat_map(|y| (0..width).map(move |x| (2 * y, 2 * x)))
        .collect();
    let start = first_dead_end.expect("a finite DFS always hits a dead end");

    // Provisional graph to walk the tree; the goal is filled in below.
    let mut maze = MazeGraph::build(
        &positions,
        &edges,
        start,
        start,
        Heading::N,
        UNIT_MM,
        EnvConfig::default(),
    )
    .expect("grid DFS edges are straight unit segments");

    let mut dist = vec![usize::MAX; count];
    dist[start.0] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        for h in Heading::ALL {
            if let Some(m) = maze.neighbor(n, h) {
                if dist[m.0] == usize::MAX {
                    dist[m.0] = dist[n.0] + 1;
                    queue.push_back(m);
                }
            }
        }
    }
    let far = *dist.iter().max().expect("nonempty grid");
    maze.goal = NodeId(dist.iter().position(|&d| d == far).expect("max exists"));
    let heading = maze
        .node(start)
        .exit_headings()
        .next()
        .expect("start is a leaf with one exit");
    maze.start_heading = heading;
    Some(maze)
}
