//! Generate a seeded tree maze, print it, and show it survives a reload.
//!
//! Usage: `cargo run --example generate_maze -- [width] [height] [seed]`

use bdi_maze::maze::{generate_maze, load_maze};

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("arguments are integers"))
        .collect();
    let (w, h, seed) = match args[..] {
        [w, h, seed] => (w as usize, h as usize, seed),
        _ => (5, 5, 42),
    };
    let maze = generate_maze(w, h, seed).expect("width and height must be at least 2");
    let text = maze.to_text();
    print!("{text}");

    let reloaded = load_maze(&text).expect("generated text reloads");
    assert_eq!(reloaded.to_text(), text);
    println!(
        "\n{} nodes, {} segments, tree: {}, start {} facing {}, goal {}",
        maze.nodes.len(),
        maze.segments.len(),
        maze.is_tree(),
        maze.start,
        maze.start_heading,
        maze.goal
    );
}
