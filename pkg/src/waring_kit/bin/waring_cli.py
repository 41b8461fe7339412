#!/usr/bin/env python3
import time
from typing import Any, Callable, Dict, List, Optional
import typer
from waring_kit import cache, classprod, sl2, suite, symchar, triprime, words
from waring_kit.config import config_data
from waring_kit.errors import PreconditionError, VerificationError, WaringKitError
from waring_kit.logger import logger
from waring_kit.perm import Partition, format_cycles
from waring_kit.types import ImageMode, RunReport


app = typer.Typer(help="Word maps, character bounds and class products in S_n, A_n and SL2(p).")
char_app = typer.Typer(help="Characters of S_n.")
class_app = typer.Typer(help="Conjugacy class products in S_n.")
word_app = typer.Typer(help="Word images.")
sl2_app = typer.Typer(help="SL2(p) search and embeddings.")
primes_app = typer.Typer(help="Admissible primes and the three-primes witness.")
cache_app = typer.Typer(help="Character table cache.")
verify_app = typer.Typer(help="Acceptance checks.")
app.add_typer(char_app, name="char")
app.add_typer(class_app, name="class")
app.add_typer(word_app, name="word")
app.add_typer(sl2_app, name="sl2")
app.add_typer(primes_app, name="primes")
app.add_typer(cache_app, name="cache")
app.add_typer(verify_app, name="verify")

JSON_OPTION = typer.Option(False, "--json", help="Print the report as JSON.")
SEED_OPTION = typer.Option(None, "--seed", help="Random seed (defaults to the config seed).")
THREADS_OPTION = typer.Option(None, "--threads", help="Worker threads.")
BUDGET_OPTION = typer.Option(None, "--budget", help="Evaluation budget.")
CACHE_OPTION = typer.Option("", "--cache-dir", help="Character table cache directory.")


def _seed(seed: Optional[int]) -> int:
    return seed if seed is not None else config_data["seed"]


def _show(value: Any, indent: str = "  ") -> str:
    if isinstance(value, dict):
        return "\n".join(f"{indent}{key}: {_show(item, indent + '  ')}" for key, item in value.items())
    return str(value)


def _emit(report: RunReport, as_json: bool) -> None:
    if as_json:
        typer.echo(report.model_dump_json(indent=2))
    else:
        typer.echo(f"{report.command} (seed={report.seed})")
        for key, value in report.results.items():
            if isinstance(value, dict):
                typer.echo(f"  {key}:\n{_show(value, '    ')}")
            else:
                typer.echo(f"  {key}: {value}")
        for name, passed in report.assertions.items():
            typer.echo(f"  [{'PASS' if passed else 'FAIL'}] {name}")
        typer.echo(f"  wall time: {report.wall_time:.2f}s")
    if not report.passed:
        raise typer.Exit(code=1)


def _execute(
    command: str,
    parameters: Dict[str, Any],
    as_json: bool,
    body: Callable[[RunReport], None],
    seed: Optional[int] = None,
) -> None:
    report = RunReport(command=command, parameters=parameters, seed=seed)
    start = time.time()
    try:
        body(report)
    except VerificationError as e:
        logger.error(f"Internal verification failed: {e}")
        report.assertions["verification"] = False
    except WaringKitError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=2)
    report.wall_time = time.time() - start
    _emit(report, as_json)


def _partition(text: Optional[str], name: str, n: Optional[int] = None) -> Partition:
    if not text:
        raise PreconditionError(f"Missing --{name}.")
    partition = Partition.parse(text)
    if n is not None and partition.n != n:
        raise PreconditionError(f"--{name} {text} is not a partition of {n}.")
    return partition


def _context(group: str, n: Optional[int], p: Optional[int]) -> words.GroupContext:
    key = group.upper()
    if key == "SL2":
        if p is None:
            raise PreconditionError("SL2 needs --p.")
        return words.GroupContext.sl2(p)
    if n is None:
        raise PreconditionError(f"Group {group} needs --n.")
    if key == "S":
        return words.GroupContext.symmetric(n)
    if key == "A":
        return words.GroupContext.alternating(n)
    raise PreconditionError(f"Unknown group '{group}', use S, A or SL2.")


@char_app.command("table")
def char_table(
    n: int = typer.Option(..., "--n"),
    cache_dir: str = CACHE_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        table = cache.load_or_build(n, cache_dir, threads)
        report.results["partitions"] = [list(lam) for lam in table.partitions]
        report.results["values"] = [[str(v) for v in row] for row in table.values]
        report.assertions["orthogonality"] = table.check_orthogonality()

    _execute("char table", {"n": n}, as_json, body)


@char_app.command("eval")
def char_eval(
    lam: str = typer.Option(..., "--lam", help="Irreducible character, e.g. 3,1,1."),
    mu: str = typer.Option(..., "--type", help="Class cycle type, e.g. 2,2,1."),
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        value = symchar.mn_value(_partition(lam, "lam"), _partition(mu, "type"))
        report.results["value"] = str(value)

    _execute("char eval", {"lam": lam, "type": mu}, as_json, body)


@char_app.command("zeta")
def char_zeta(
    n: int = typer.Option(..., "--n"),
    s: float = typer.Option(2.0, "--s"),
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        value = symchar.zeta(n, s)
        report.results["zeta"] = value
        if n >= 2:
            report.assertions["at_least_two"] = value >= 2.0

    _execute("char zeta", {"n": n, "s": s}, as_json, body)


@char_app.command("bounds")
def char_bounds(
    n: int = typer.Option(..., "--n"),
    threads: Optional[int] = THREADS_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        character = symchar.verify_char_bound(n, threads)
        dimension = symchar.verify_dim_bound(n)
        report.results["char_bound"] = character.model_dump(mode="json")
        report.results["dim_bound"] = dimension.model_dump(mode="json")
        report.assertions["char_bound"] = character.violations == 0
        report.assertions["ncycle_values"] = (
            character.ncycle_values_bounded and character.ncycle_support_single_layer
        )
        report.assertions["dim_bound"] = dimension.violations == 0
        # tabulated only
        report.results["exponents"] = [
            symchar.verify_sigma_estimate(n, 3, threads).model_dump(mode="json"),
            symchar.verify_fixed_point_bound(n, max(1, n // 4), threads).model_dump(mode="json"),
            symchar.verify_exponential_degree(n).model_dump(mode="json"),
        ]

    _execute("char bounds", {"n": n}, as_json, body)


@class_app.command("constant")
def class_constant(
    c1: str = typer.Option(..., "--c1"),
    c2: str = typer.Option(..., "--c2"),
    cg: str = typer.Option(..., "--cg"),
    brute: bool = typer.Option(False, "--brute", help="Cross-check by enumeration."),
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        a, b, g = _partition(c1, "c1"), _partition(c2, "c2"), _partition(cg, "cg")
        constant = classprod.structure_constant(a, b, g)
        report.results["constant"] = constant.model_dump(mode="json")
        report.results["probability"] = str(constant.probability)
        if a == b:
            linear, rest = classprod.linear_contribution(a, g)
            report.results["linear_part"] = str(linear)
            report.results["nonlinear_part"] = str(rest)
        if brute:
            report.assertions["matches_brute_force"] = (
                classprod.brute_constant(a, b, g) == constant.count
            )

    _execute("class constant", {"c1": c1, "c2": c2, "cg": cg}, as_json, body)


@class_app.command("square")
def class_square(
    type_: str = typer.Option(..., "--type"),
    n: Optional[int] = typer.Option(None, "--n"),
    cache_dir: str = CACHE_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        c = _partition(type_, "type", n)
        cache.load_or_build(c.n, cache_dir)
        covers, missing = classprod.class_square_covers(c)
        report.results["covers"] = covers
        report.results["missing"] = list(missing) if missing is not None else None
        report.results["square_classes"] = [list(t) for t in classprod.class_square(c)]
        report.assertions["square_covers_An"] = covers

    _execute("class square", {"type": type_, "n": n}, as_json, body)


@class_app.command("survey")
def class_survey(
    n: int = typer.Option(..., "--n"),
    trials: int = typer.Option(200, "--trials"),
    alternating: bool = typer.Option(False, "--alternating", help="Sample sigma in A_n."),
    seed: Optional[int] = SEED_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    seed = _seed(seed)

    def body(report: RunReport) -> None:
        survey = (
            classprod.random_alternating_survey(n, trials, seed)
            if alternating
            else classprod.random_class_square_survey(n, trials, seed)
        )
        report.results["survey"] = survey.model_dump(mode="json")
        report.results["exact_fraction"] = str(classprod.exact_square_fraction(n))

    _execute(
        "class survey",
        {"n": n, "trials": trials, "alternating": alternating},
        as_json,
        body,
        seed,
    )


@class_app.command("construct")
def class_construct(
    alpha: str = typer.Option(..., "--alpha"),
    beta: str = typer.Option(..., "--beta"),
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        a = _partition(alpha, "alpha")
        certificate = classprod.construct_delta(a, _partition(beta, "beta", a.n))
        report.results["certificate"] = certificate.export()
        report.results["delta"] = format_cycles(certificate.delta)
        report.assertions["verified"] = certificate.verified

    _execute("class construct", {"alpha": alpha, "beta": beta}, as_json, body)


@class_app.command("packable")
def class_packable(
    alpha: str = typer.Option(..., "--alpha"),
    cross_check: bool = typer.Option(True, "--cross-check/--no-cross-check"),
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        found = classprod.covered_by_packing(_partition(alpha, "alpha"), cross_check=cross_check)
        report.results["classes"] = [list(t) for t in found]
        report.results["count"] = len(found)

    _execute("class packable", {"alpha": alpha, "cross_check": cross_check}, as_json, body)


@word_app.command("image")
def word_image(
    word: str = typer.Option(..., "--word"),
    group: str = typer.Option("A", "--group", help="S, A or SL2."),
    n: Optional[int] = typer.Option(None, "--n"),
    p: Optional[int] = typer.Option(None, "--p"),
    samples: int = typer.Option(0, "--samples", help="Sample this many tuples instead of enumerating."),
    budget: Optional[int] = BUDGET_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    seed: Optional[int] = SEED_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    seed = _seed(seed)

    def body(report: RunReport) -> None:
        G = _context(group, n, p)
        mode = ImageMode.SAMPLED if samples > 0 else ImageMode.EXACT
        found = words.image(
            words.parse_word(word),
            G,
            mode=mode,
            samples=samples,
            budget=budget,
            seed=seed,
            threads=threads,
        )
        report.results["group"] = G.name
        report.results["mode"] = mode.value
        report.results["classes"] = found.labels()
        report.results["size"] = str(found.size)
        report.results["density"] = str(found.density)

    _execute(
        "word image",
        {"word": word, "group": group, "n": n, "p": p, "samples": samples},
        as_json,
        body,
        seed,
    )


@word_app.command("waring")
def word_waring(
    word: List[str] = typer.Option(..., "--word", help="Repeat for each factor."),
    group: str = typer.Option("A", "--group"),
    n: Optional[int] = typer.Option(None, "--n"),
    p: Optional[int] = typer.Option(None, "--p"),
    budget: Optional[int] = BUDGET_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        G = _context(group, n, p)
        ws = [words.parse_word(text) for text in word]
        if len(ws) == 1:
            ws = ws * 2
        covers = words.verify_waring_many(ws, G, budget=budget, threads=threads)
        report.results["group"] = G.name
        report.results["covers"] = covers
        report.assertions["product_covers"] = covers

    _execute("word waring", {"word": word, "group": group, "n": n, "p": p}, as_json, body)


@word_app.command("intersect")
def word_intersect(
    word: List[str] = typer.Option(..., "--word"),
    group: str = typer.Option("A", "--group"),
    n: Optional[int] = typer.Option(None, "--n"),
    p: Optional[int] = typer.Option(None, "--p"),
    budget: Optional[int] = BUDGET_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        G = _context(group, n, p)
        ws = [words.parse_word(text) for text in word]
        common = words.intersect_images(ws, G, budget=budget, threads=threads)
        coverage = words.product_covers(common, common)
        report.results["group"] = G.name
        report.results["intersection"] = common.labels()
        report.results["density"] = str(common.density)
        report.results["coverage"] = coverage.model_dump(mode="json")
        report.assertions["square_covers"] = coverage.covers

    _execute("word intersect", {"word": word, "group": group, "n": n, "p": p}, as_json, body)


@word_app.command("mincyc")
def word_mincyc(
    word: str = typer.Option(..., "--word"),
    n: int = typer.Option(..., "--n"),
    budget: Optional[int] = BUDGET_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        w = words.parse_word(word)
        report.results["min_cycles"] = words.min_cycles_in_image(w, n, budget=budget, threads=threads)
        density = words.image_density(w, words.GroupContext.alternating(n), budget=budget)
        report.results["density"] = str(density)
        # open lower-bound problem, tabulated only
        report.results["density_at_least_1_over_n"] = density * n >= 1

    _execute("word mincyc", {"word": word, "n": n}, as_json, body)


@sl2_app.command("search")
def sl2_search(
    word: str = typer.Option(..., "--word"),
    p: int = typer.Option(..., "--p"),
    budget: Optional[int] = BUDGET_OPTION,
    seed: Optional[int] = SEED_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    seed = _seed(seed)

    def body(report: RunReport) -> None:
        w = words.parse_word(word)
        result = sl2.find_high_order_value(w, p, budget=budget, seed=seed)
        report.results["search"] = result.model_dump(mode="json")
        if result.found:
            element = sl2.SL2Elem.from_matrix(result.element, p)
            replay = words.evaluate(
                w,
                dict(zip(w.generators, (sl2.SL2Elem.from_matrix(m, p) for m in result.witness))),
                sl2.SL2Context(p),
            )
            report.results["embedding"] = list(sl2.embed_to_An(element, p).cycle_type())
            report.assertions["witness_replays"] = replay == element
        report.assertions["found"] = result.found

    _execute("sl2 search", {"word": word, "p": p, "budget": budget}, as_json, body, seed)


@sl2_app.command("embed")
def sl2_embed(
    p: int = typer.Option(..., "--p"),
    matrix: str = typer.Option("", "--matrix", help="a,b,c,d; defaults to a torus element."),
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        if matrix:
            a, b, c, d = (int(x) for x in matrix.split(","))
            element = sl2.SL2Elem(a, b, c, d, p)
        else:
            element = sl2.torus_element(p)
        perm = sl2.embed_to_An(element, p)
        report.results["matrix"] = element.matrix()
        report.results["order"] = sl2.element_order(element)
        report.results["cycles"] = format_cycles(perm)
        report.results["cycle_type"] = list(perm.cycle_type())
        report.assertions["even"] = perm.cycle_type().is_even

    _execute("sl2 embed", {"p": p, "matrix": matrix}, as_json, body)


@sl2_app.command("density")
def sl2_density(
    word: List[str] = typer.Option(..., "--word"),
    p: int = typer.Option(..., "--p"),
    samples: int = typer.Option(0, "--samples"),
    budget: Optional[int] = BUDGET_OPTION,
    seed: Optional[int] = SEED_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    seed = _seed(seed)

    def body(report: RunReport) -> None:
        ws = [words.parse_word(text) for text in word]
        mode = ImageMode.SAMPLED if samples > 0 else ImageMode.EXACT
        report.results["densities"] = {
            str(w): str(
                sl2.image_density(
                    w, p, mode=mode, samples=samples, seed=seed, budget=budget, threads=threads
                )
            )
            for w in ws
        }
        if len(ws) > 1:
            report.results["intersection_density"] = str(
                sl2.intersection_density(ws, p, budget=budget, threads=threads)
            )

    _execute("sl2 density", {"word": word, "p": p, "samples": samples}, as_json, body, seed)


@sl2_app.command("trace")
def sl2_trace(
    u: int = typer.Option(..., "--u"),
    p: int = typer.Option(..., "--p"),
    M: Optional[int] = typer.Option(None, "--M"),
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        diagnostics = sl2.trace_conditions(u, p, M)
        report.results["diagnostics"] = diagnostics.model_dump(mode="json")
        report.results["passes"] = diagnostics.passes

    _execute("sl2 trace", {"u": u, "p": p, "M": M}, as_json, body)


@primes_app.command("decompose")
def primes_decompose(
    N: int = typer.Option(..., "--N"),
    M: Optional[int] = typer.Option(None, "--M"),
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        triple = triprime.decompose(N, M)
        report.results["triple"] = triple.model_dump(mode="json") if triple else None
        report.results["feasible_offsets"] = triprime.feasible_offsets(N, M)
        report.assertions["decomposed"] = triple is not None

    _execute("primes decompose", {"N": N, "M": M}, as_json, body)


@primes_app.command("count")
def primes_count(
    N: int = typer.Option(..., "--N"),
    M: Optional[int] = typer.Option(None, "--M"),
    upto: Optional[int] = typer.Option(None, "--to", help="Tabulate N, N+step, ... up to this."),
    step: int = typer.Option(12, "--step"),
    threads: Optional[int] = THREADS_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        if upto is None:
            report.results["count"] = triprime.count_representations(N, M)
        else:
            table = triprime.representation_table(N, upto, step, M, threads)
            report.results["counts"] = {str(k): v for k, v in table.items()}

    _execute("primes count", {"N": N, "M": M, "to": upto, "step": step}, as_json, body)


@primes_app.command("sigma")
def primes_sigma(
    N: int = typer.Option(..., "--N"),
    M: Optional[int] = typer.Option(None, "--M"),
    word: Optional[str] = typer.Option(None, "--word"),
    budget: Optional[int] = BUDGET_OPTION,
    seed: Optional[int] = SEED_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    seed = _seed(seed)

    def body(report: RunReport) -> None:
        w = words.parse_word(word) if word else None
        witness = triprime.build_sigma(N, M, w=w, budget=budget, seed=seed)
        report.results["sigma"] = witness.model_dump(mode="json")
        report.assertions["few_cycles"] = witness.cyc <= 23
        report.assertions["fixed_points"] = witness.fix >= 6
        report.assertions["even"] = witness.even

    _execute("primes sigma", {"N": N, "M": M, "word": word}, as_json, body, seed)


@primes_app.command("lowerbound")
def primes_lowerbound(
    N: int = typer.Option(..., "--N"),
    M: Optional[int] = typer.Option(None, "--M"),
    epsilon: float = typer.Option(0.5, "--epsilon"),
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        bound = triprime.lower_bound_report(N, M, epsilon)
        report.results["report"] = bound.model_dump(mode="json")
        report.assertions["centralizer_bound"] = all(bound.within_centralizer_bound)

    _execute("primes lowerbound", {"N": N, "M": M, "epsilon": epsilon}, as_json, body)


@cache_app.command("save")
def cache_save(
    n: int = typer.Option(..., "--n"),
    cache_dir: str = CACHE_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        path = cache.save_table(symchar.character_table(n, threads), cache_dir)
        report.results["path"] = path
        report.assertions["saved"] = path is not None

    _execute("cache save", {"n": n}, as_json, body)


@cache_app.command("load")
def cache_load(
    n: int = typer.Option(..., "--n"),
    cache_dir: str = CACHE_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        table = cache.load_table(n, cache_dir)
        report.results["path"] = cache.table_path(n, cache_dir)
        report.results["valid"] = table is not None

    _execute("cache load", {"n": n}, as_json, body)


@cache_app.command("clear")
def cache_clear(
    cache_dir: str = CACHE_OPTION,
    as_json: bool = JSON_OPTION,
) -> None:
    def body(report: RunReport) -> None:
        report.results["removed"] = cache.clear_cache(cache_dir)

    _execute("cache clear", {}, as_json, body)


@verify_app.command("all")
def verify_all(
    seed: Optional[int] = SEED_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    full: bool = typer.Option(False, "--full", help="Run acceptance-size checks."),
    as_json: bool = JSON_OPTION,
) -> None:
    seed = _seed(seed)
    try:
        report = suite.run_all(seed, threads=threads, full=full)
    except WaringKitError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=2)
    _emit(report, as_json)


def main() -> None:
    app()


if __name__ == "__main__":
    main()
