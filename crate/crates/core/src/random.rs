//! Seeded generators of cirquents and small static games for tests and
//! tournaments.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cirquent::{Cirquent, Cluster, Letter, Literal, Polarity};
use crate::game::{FiniteGame, Interpretation, Player, RawMove, RawRun};

#[derive(Debug, Clone)]
pub struct CirquentGen {
    /// Upper bound on the node count; the size is drawn uniformly below it.
    pub max_nodes: usize,
    pub letters: Vec<Letter>,
    pub max_cluster: Cluster,
    /// Chance that a leaf is `top` or `bot` rather than a literal.
    pub constant_rate: f64,
}

impl CirquentGen {
    pub fn new(max_nodes: usize, letters: &[&str], max_cluster: Cluster) -> CirquentGen {
        CirquentGen {
            max_nodes,
            letters: letters.iter().map(|l| Letter::named(l)).collect(),
            max_cluster,
            constant_rate: 0.1,
        }
    }

    pub fn generate(&self, rng: &mut impl Rng) -> Cirquent {
        let size = rng.gen_range(1..=self.max_nodes.max(1));
        self.sized(rng, size)
    }

    /// A cirquent of exactly `size` nodes, rounded down to an odd number.
    pub fn sized(&self, rng: &mut impl Rng, size: usize) -> Cirquent {
        if size < 3 {
            return self.leaf(rng);
        }
        let left = 1 + 2 * rng.gen_range(0..(size - 1) / 2);
        let right = size - 1 - left;
        let (a, b) = (self.sized(rng, left), self.sized(rng, right));
        match rng.gen_range(0..4) {
            0 => Cirquent::pand(a, b),
            1 => Cirquent::por(a, b),
            2 => Cirquent::chand(rng.gen_range(0..=self.max_cluster), a, b),
            _ => Cirquent::chor(rng.gen_range(0..=self.max_cluster), a, b),
        }
    }

    fn leaf(&self, rng: &mut impl Rng) -> Cirquent {
        if self.letters.is_empty() || rng.gen_bool(self.constant_rate) {
            return if rng.gen() { Cirquent::Top } else { Cirquent::Bot };
        }
        let letter = self.letters.choose(rng).expect("letters").clone();
        let cluster = if letter.is_general() {
            rng.gen_range(0..=self.max_cluster)
        } else {
            0
        };
        let polarity = if rng.gen() {
            Polarity::Positive
        } else {
            Polarity::Negative
        };
        Literal::new(letter, cluster, polarity).into()
    }
}

/// Shapes of random depth-two static games.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameFamily {
    /// The environment moves, then the machine answers.
    Response,
    /// The machine moves, then the environment answers.
    TopFirst,
    /// Each player moves at most once, in either order; the winner depends
    /// only on which moves were made.
    OrderIndependent,
}

pub const GAME_FAMILIES: [GameFamily; 3] = [GameFamily::Response, GameFamily::TopFirst, GameFamily::OrderIndependent];

const TOKENS: [&str; 2] = ["0", "1"];

fn nonempty_subset<'a>(rng: &mut impl Rng) -> Vec<&'a str> {
    loop {
        let s: Vec<&str> = TOKENS.iter().copied().filter(|_| rng.gen()).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

fn coin(rng: &mut impl Rng) -> Player {
    if rng.gen() {
        Player::T
    } else {
        Player::B
    }
}

fn raw(moves: &[(Player, &str)]) -> RawRun {
    moves.iter().map(|&(p, m)| RawMove::new(p, m)).collect()
}

fn candidate(rng: &mut impl Rng, family: GameFamily) -> Vec<(RawRun, Player)> {
    match family {
        GameFamily::Response | GameFamily::TopFirst => {
            let (first, second) = match family {
                GameFamily::Response => (Player::B, Player::T),
                _ => (Player::T, Player::B),
            };
            let mut runs = vec![(Vec::new(), coin(rng))];
            for x in nonempty_subset(rng) {
                runs.push((raw(&[(first, x)]), coin(rng)));
                for y in nonempty_subset(rng) {
                    runs.push((raw(&[(first, x), (second, y)]), coin(rng)));
                }
            }
            runs
        }
        GameFamily::OrderIndependent => {
            let bs = nonempty_subset(rng);
            let ts = nonempty_subset(rng);
            let mut runs = vec![(Vec::new(), coin(rng))];
            let mut outcome = std::collections::HashMap::new();
            for &b in &bs {
                runs.push((raw(&[(Player::B, b)]), coin(rng)));
            }
            for &t in &ts {
                runs.push((raw(&[(Player::T, t)]), coin(rng)));
            }
            for &b in &bs {
                for &t in &ts {
                    let w = *outcome.entry((b, t)).or_insert_with(|| coin(rng));
                    runs.push((raw(&[(Player::B, b), (Player::T, t)]), w));
                    runs.push((raw(&[(Player::T, t), (Player::B, b)]), w));
                }
            }
            runs
        }
    }
}

/// A random game of the family that passes the bounded static check. Falls
/// back to the move-free game won by the machine if none is found.
pub fn random_game(rng: &mut impl Rng, family: GameFamily) -> FiniteGame {
    for _ in 0..200 {
        if let Ok(g) = FiniteGame::new(candidate(rng, family)) {
            return g;
        }
    }
    FiniteGame::elementary(Player::T)
}

/// Echo of one bit: the environment plays a bit, the machine wins iff it
/// repeats it.
pub fn bit_echo_game() -> FiniteGame {
    token_echo_game(&TOKENS)
}

/// The environment plays one of `tokens`, then the machine plays one; the
/// machine wins iff the tokens are equal or nobody moved.
pub fn token_echo_game(tokens: &[&str]) -> FiniteGame {
    let mut runs = vec![(Vec::new(), Player::T)];
    for &b in tokens {
        runs.push((raw(&[(Player::B, b)]), Player::B));
        for &t in tokens {
            let w = if b == t { Player::T } else { Player::B };
            runs.push((raw(&[(Player::B, b), (Player::T, t)]), w));
        }
    }
    FiniteGame::new(runs).expect("echo games are static")
}

/// Games for all letters of `letters`: random static games for general
/// letters, random move-free games for elementary ones.
pub fn random_interpretation<'a>(rng: &mut impl Rng, letters: impl IntoIterator<Item = &'a Letter>) -> Interpretation {
    let mut interp = Interpretation::new();
    for l in letters {
        let game = if l.is_general() {
            let family = *GAME_FAMILIES.choose(rng).expect("families");
            random_game(rng, family)
        } else {
            FiniteGame::elementary(coin(rng))
        };
        interp.insert(l.clone(), game).expect("kinds match");
    }
    interp
}
