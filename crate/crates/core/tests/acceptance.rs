//! Acceptance suite: reproduces the worked examples exactly and runs the
//! property checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use placement_core::algebra::parse_monomials;
use placement_core::play::{check_equivalence, parse_moves, Arena, MatchState};
use placement_core::rulesets::{builtin, check_strong_placement, BasicPosition, Ruleset, RulesetError, StrongPlacementViolation};
use placement_core::{are_isomorphic, Analysis, Board, Limits, Monomial, MonomialIdeal, SimplicialComplex, Universe};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn set(text: &str) -> HashSet<Monomial> {
    parse_monomials(text).unwrap().into_iter().collect()
}

fn analyze(game: &str, board: &Board) -> Result<Analysis, String> {
    Analysis::new(builtin(game).unwrap(), board.clone(), &Limits::default()).map_err(|e| e.to_string())
}

fn facets_equal(c: &SimplicialComplex, expected: &str, what: &str) -> Result<(), String> {
    let got: HashSet<Monomial> = c.facets().into_iter().collect();
    let want = set(expected);
    ensure(got == want, || format!("{what}: got {c}, want {{{expected}}}"))
}

fn ideal_equal(i: &MonomialIdeal, expected: &str, what: &str) -> Result<(), String> {
    let want = MonomialIdeal::minimal_generators(i.universe().clone(), &parse_monomials(expected).unwrap())
        .map_err(|e| e.to_string())?;
    ensure(i.equals(&want).unwrap(), || format!("{what}: got {i}, want {want}"))?;
    ensure(i.len() == parse_monomials(expected).unwrap().len(), || {
        format!("{what}: listing is not minimal")
    })
}

fn p(n: usize) -> Board {
    Board::path(n).unwrap()
}

fn c(n: usize) -> Board {
    Board::cycle(n).unwrap()
}

/// Games x boards covered by the duality, equivalence and polynomial checks.
fn corpus() -> Vec<(&'static str, Board)> {
    let boards: Vec<Board> = (1..=5).map(p).chain((3..=5).map(c)).collect();
    let mut out = Vec::new();
    for game in ["trivial", "snort", "col", "nogo"] {
        for b in &boards {
            out.push((game, b.clone()));
        }
    }
    out.push(("domineering", Board::grid(2, 2).unwrap()));
    out.push(("domineering", Board::grid(2, 3).unwrap()));
    out
}

fn criterion_1() -> Check {
    let a = analyze("col", &p(3))?;
    facets_equal(&a.legal_complex(), "x1*y2*x3, y1*x2*y3, x1*y3, y1*x3", "legal complex")?;
    ideal_equal(&a.legal_ideal(), "x1*y2*x3, y1*x2*y3, x1*y3, y1*x3", "legal ideal")?;
    Ok(format!("I_legal = {}", a.legal_ideal()))
}

fn criterion_2() -> Check {
    let a = analyze("col", &p(3))?;
    let delta = a.legal_complex();
    let non_faces: HashSet<Monomial> = delta.minimal_non_faces().into_iter().collect();
    let edges = "x1*x2, x2*x3, y1*y2, y2*y3, x1*y1, x2*y2, x3*y3";
    ensure(non_faces == set(edges), || format!("minimal non-faces {non_faces:?}"))?;
    let report = a.verify_duality();
    ensure(report.all_hold(), || report.to_string())?;

    // Besides the four adjacency generators, double occupancy of a cell is
    // illegal too, which adds the three same-cell edges.
    let adjacent = set("x1*x2, x2*x3, y1*y2, y2*y3");
    let illegal: HashSet<Monomial> = a.illegal_ideal().generators().into_iter().collect();
    ensure(adjacent.is_subset(&illegal), || "adjacency generators missing".into())?;
    let extra: BTreeSet<String> = illegal.difference(&adjacent).map(|m| m.to_string()).collect();
    ensure(extra == ["x1*y1", "x2*y2", "x3*y3"].map(String::from).into(), || {
        format!("unexpected extra generators {extra:?}")
    })?;
    Ok(format!(
        "{report}; same-cell generators: {}",
        extra.into_iter().collect::<Vec<_>>().join(", ")
    ))
}

fn criterion_3() -> Check {
    facets_equal(&analyze("snort", &p(3))?.legal_complex(), "x1*x2*x3, y1*y2*y3, x1*y3, x3*y1", "snort P3")?;
    facets_equal(&analyze("snort", &c(3))?.legal_complex(), "x1*x2*x3, y1*y2*y3", "snort C3")?;
    Ok("snort P3 (4 facets), C3 (2 facets)".into())
}

fn criterion_4() -> Check {
    facets_equal(
        &analyze("col", &c(3))?.legal_complex(),
        "x1*y2, x1*y3, x2*y3, y1*x2, y1*x3, y2*x3",
        "col C3",
    )?;
    Ok("col C3 (6 facets)".into())
}

fn criterion_5() -> Check {
    let a = analyze("nogo", &p(3))?;
    ideal_equal(&a.legal_ideal(), "x1*x2, x1*x3, x1*y3, x2*x3, y1*x3, y1*y2, y1*y3, y2*y3", "legal ideal")?;
    let illegal = "x1*x2*x3, y1*y2*y3, x1*y1, x1*y2, x2*y2, x2*y3, x3*y3, y1*x2, y2*x3";
    ideal_equal(&a.illegal_ideal(), illegal, "illegal ideal")?;
    let gamma = a.illegal_complex().map_err(|e| e.to_string())?;
    facets_equal(&gamma, illegal, "illegal complex")?;
    let sizes: Vec<usize> = gamma.facets().iter().map(Monomial::degree).collect();
    ensure(
        sizes.iter().filter(|&&s| s == 3).count() == 2 && sizes.iter().filter(|&&s| s == 2).count() == 7,
        || format!("facet sizes {sizes:?}"),
    )?;
    Ok(format!("|I_legal| = {}, |I_illegal| = {}", a.legal_ideal().len(), a.illegal_ideal().len()))
}

fn criterion_6() -> Check {
    let a = analyze("col", &p(5))?;
    let gamma = a.illegal_complex().map_err(|e| e.to_string())?;
    let mut want = Vec::new();
    for i in 1..=5 {
        want.push(format!("x{i}*y{i}"));
        if i < 5 {
            want.push(format!("x{i}*x{}", i + 1));
            want.push(format!("y{i}*y{}", i + 1));
        }
    }
    facets_equal(&gamma, &want.join(", "), "col P5 illegal complex")?;
    ensure(gamma.facets().len() == 13, || "expected 13 facets".into())?;
    let moves = parse_moves("L:x1 R:y3 L:x4 R:y5").unwrap();
    let state = MatchState::replay(Arc::new(Arena::IllegalComplex(gamma)), &moves)
        .map_err(|(i, e)| format!("move {i} rejected: {e}"))?;
    ensure(state.occupied().to_string() == "x1*y3*x4*y5", || "wrong final position".into())?;
    Ok("13 facets; x1*y3*x4*y5 accepted".into())
}

fn random_antichain(rng: &mut StdRng) -> (Universe, Vec<Monomial>) {
    let n = rng.gen_range(1..=8u32);
    let left = rng.gen_range(0..=n);
    let universe = Universe::players(left, n - left).unwrap();
    let k = rng.gen_range(0..=6);
    let sets: Vec<Monomial> = (0..k)
        .map(|_| universe.monomial(rng.gen_range(0..1u64 << n)))
        .collect();
    (universe, sets)
}

fn criterion_7() -> Check {
    let six = Universe::players(6, 0).unwrap();
    let hexagon = SimplicialComplex::from_facets(
        six.clone(),
        &parse_monomials("x2*x3*x4, x4*x5*x6, x1*x2, x1*x6, x3*x5").unwrap(),
    )
    .unwrap();
    ideal_equal(&hexagon.facet_ideal(), "x1*x2, x1*x6, x2*x3*x4, x3*x5, x4*x5*x6", "facet ideal")?;
    ideal_equal(&hexagon.sr_ideal(), "x1*x3, x1*x4, x1*x5, x2*x5, x2*x6, x3*x4*x5, x3*x6", "Stanley-Reisner ideal")?;

    let four = Universe::players(4, 0).unwrap();
    let i = MonomialIdeal::minimal_generators(four, &parse_monomials("x1*x3, x2*x3*x4").unwrap()).unwrap();
    facets_equal(&SimplicialComplex::facet_complex(&i), "x1*x3, x2*x3*x4", "F(I)")?;
    facets_equal(&SimplicialComplex::sr_complex(&i), "x1*x2*x4, x2*x3, x3*x4", "N(I)")?;

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();
    for trial in 0..200 {
        let (universe, sets) = random_antichain(&mut rng);
        let delta = SimplicialComplex::from_facets(universe.clone(), &sets).unwrap();
        let ideal = MonomialIdeal::minimal_generators(universe, &sets).unwrap();
        if SimplicialComplex::facet_complex(&delta.facet_ideal()) != delta {
            failures.push(format!("#{trial} F(F(D)) for {delta}"));
        }
        if SimplicialComplex::facet_complex(&ideal).facet_ideal() != ideal {
            failures.push(format!("#{trial} F(F(I)) for {ideal}"));
        }
        if SimplicialComplex::sr_complex(&delta.sr_ideal()) != delta {
            failures.push(format!("#{trial} N(N(D)) for {delta}"));
        }
        if SimplicialComplex::sr_complex(&ideal).sr_ideal() != ideal {
            failures.push(format!("#{trial} N(N(I)) for {ideal}"));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok("fixed examples exact; 200 random round trips, 0 failures".into())
}

fn criterion_8() -> Check {
    for (game, board) in corpus() {
        let report = analyze(game, &board)?.verify_duality();
        ensure(report.all_hold(), || format!("{game} on {board:?}: {report}"))?;
    }
    Ok(format!("{} game/board pairs, all OK OK OK", corpus().len()))
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    for (game, board) in corpus() {
        if board.vertex_count() > 8 {
            continue;
        }
        let divergence = check_equivalence(builtin(game).unwrap(), board.clone(), None, &Limits::default())
            .map_err(|e| e.to_string())?;
        ensure(divergence.is_none(), || format!("{game} on {board}: {}", divergence.unwrap()))?;
        checked += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} pairs equivalent at full depth in {:.2?}", elapsed))
}

fn criterion_10() -> Check {
    for (game, board) in corpus() {
        let a = analyze(game, &board)?;
        let poly = a.game_polynomial();
        let f = a.legal_complex().f_vector();
        ensure(poly.coefficients == f.0, || format!("{game} on {board}: {poly} vs {f}"))?;
        ensure(poly.evaluate(1) as usize == a.legal_positions().len(), || {
            format!("{game} on {board}: P(1) = {}", poly.evaluate(1))
        })?;
    }
    Ok("coefficients = f-vector and P(1) = #legal positions for every pair".into())
}

fn criterion_11() -> Check {
    for n in 2..=4 {
        let col = analyze("col", &p(n))?.legal_complex();
        let snort = analyze("snort", &p(n))?.legal_complex();
        ensure(are_isomorphic(&col, &snort).unwrap().is_some(), || format!("P{n} not isomorphic"))?;
    }
    let col = analyze("col", &c(3))?.legal_complex();
    let snort = analyze("snort", &c(3))?.legal_complex();
    ensure(are_isomorphic(&col, &snort).unwrap().is_none(), || "C3 isomorphic".into())?;
    Ok("P2, P3, P4 isomorphic; C3 not".into())
}

fn criterion_12() -> Check {
    let p2 = p(2);
    let sum = p2.disjoint_union(&p2);
    for game in ["snort", "col", "nogo"] {
        let part = analyze(game, &p2)?;
        let whole = analyze(game, &sum)?;
        let joined = part.legal_complex().join(&part.legal_complex()).map_err(|e| e.to_string())?;
        ensure(whole.legal_complex() == joined, || format!("{game}: {} vs {joined}", whole.legal_complex()))?;
        let product = part.game_polynomial().multiply(&part.game_polynomial());
        ensure(whole.game_polynomial() == product, || format!("{game}: {} vs {product}", whole.game_polynomial()))?;
    }
    Ok("snort, col, nogo on P2 + P2".into())
}

/// One representative of every graph on `n` vertices up to isomorphism.
fn graphs_up_to_iso(n: usize) -> Vec<Board> {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let canonical = |edges: &[(usize, usize)]| -> Vec<(usize, usize)> {
        perms
            .iter()
            .map(|p| {
                let mut e: Vec<_> = edges.iter().map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v]))).collect();
                e.sort_unstable();
                e
            })
            .min()
            .unwrap()
    };
    let mut seen = BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<_> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        seen.insert(canonical(&edges));
    }
    seen.into_iter()
        .map(|edges| Board::from_edges(n, edges.into_iter().map(|(u, v)| (u + 1, v + 1))).unwrap())
        .collect()
}

/// Legal iff the position does not hold exactly one piece.
struct PieceCountNotOne;

impl Ruleset for PieceCountNotOne {
    fn name(&self) -> String {
        "count-not-one".into()
    }
    fn basic_positions(&self, board: &Board) -> Result<Vec<BasicPosition>, RulesetError> {
        builtin("trivial").unwrap().basic_positions(board)
    }
    fn is_legal(&self, _: &Board, position: &[&BasicPosition]) -> bool {
        position.len() != 1
    }
}

fn criterion_13() -> Check {
    let limits = Limits::default();
    let mut boards = Vec::new();
    for n in 1..=6 {
        let graphs = graphs_up_to_iso(n);
        let known = [1, 2, 4, 11, 34, 156][n - 1];
        ensure(graphs.len() == known, || format!("{} graphs on {n} vertices, expected {known}", graphs.len()))?;
        boards.extend(graphs);
    }
    for game in ["trivial", "snort", "col", "nogo"] {
        let r = builtin(game).unwrap();
        for b in &boards {
            if let Some(v) = check_strong_placement(r.as_ref(), b, &limits).map_err(|e| e.to_string())? {
                return Err(format!("{game} on {b:?}: {v}"));
            }
        }
    }
    let mut grids = 0;
    for rows in 1..=6 {
        for cols in 1..=6 / rows {
            let g = Board::grid(rows, cols).unwrap();
            if let Some(v) = check_strong_placement(builtin("domineering").unwrap().as_ref(), &g, &limits)
                .map_err(|e| e.to_string())?
            {
                return Err(format!("domineering on {g}: {v}"));
            }
            grids += 1;
        }
    }
    let p2 = p(2);
    match check_strong_placement(&PieceCountNotOne, &p2, &limits).map_err(|e| e.to_string())? {
        Some(StrongPlacementViolation::NotHereditary { legal, illegal_subset }) => {
            let basics = PieceCountNotOne.basic_positions(&p2).unwrap();
            let pick = |m: &Monomial| -> Vec<&BasicPosition> {
                basics.iter().filter(|b| m.contains(b.variable())).collect()
            };
            ensure(
                illegal_subset.divides(&legal)
                    && PieceCountNotOne.is_legal(&p2, &pick(&legal))
                    && !PieceCountNotOne.is_legal(&p2, &pick(&illegal_subset)),
                || format!("invalid counterexample {legal} / {illegal_subset}"),
            )?;
            Ok(format!(
                "{} graphs x 4 games and {grids} grids hereditary; contrived ruleset: {legal} legal, {illegal_subset} not",
                boards.len()
            ))
        }
        other => Err(format!("contrived ruleset not rejected: {other:?}")),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 13] = [
        ("col P3 legal complex and legal ideal", criterion_1),
        ("col P3 minimal non-faces and duality", criterion_2),
        ("snort P3/C3 legal complexes", criterion_3),
        ("col C3 legal complex", criterion_4),
        ("nogo P3 ideals and illegal complex", criterion_5),
        ("col P5 illegal complex and play", criterion_6),
        ("facet / Stanley-Reisner operator round trips", criterion_7),
        ("duality on the game/board corpus", criterion_8),
        ("board / legal complex / illegal complex equivalence", criterion_9),
        ("game polynomial = f-vector", criterion_10),
        ("col/snort isomorphism on paths", criterion_11),
        ("disjoint union = join", criterion_12),
        ("hereditary legality", criterion_13),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS  {:>2}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.2?}",
        criteria.len() - failed,
        start.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
