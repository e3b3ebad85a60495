"""Candidate section-ring presentations and their ambient models.

A star tree with one trivalent center carries a single candidate
relation: one term per branch, the curve variable at distance t from the
center raised to the t-th power, times the branch-end section variable
raised to (branch length + 1). Chains carry no relation. Trees with a
higher-valence node or several trivalent nodes are legal graphs, but no
candidate relation rule applies to them.

The ambient model realizes the same ring inside the invariant-ring
ambient: the listed hyperplane cuts pull back, after dividing out a
monomial common factor, to exactly the candidate relation.
"""

from .errors import ParameterError, UnsupportedGraphError
from .graphs import build_singularity
from .invariants import golden_generators, golden_relations
from .rings import Polynomial, RingPresentation


def _section_name_at(graph, node):
    names = [name for name, at in graph.leaf_variables if at == node]
    if len(names) != 1:
        raise ParameterError("branch end %d needs exactly one section variable" % node)
    return names[0]


def branch_term(graph, branch, grading=None):
    """The candidate relation term of one branch."""
    grading = grading or graph.grading()
    exps = {}
    for t, node in enumerate(branch, start=1):
        exps[graph.curve_variable(node)] = t
    exps[_section_name_at(graph, branch[-1])] = len(branch) + 1
    return grading.monomial(exps)


def relation_from_graph(graph, grading=None):
    """Candidate relation polynomial, or None for a chain.

    Raises UnsupportedGraphError when the tree has a node of valence
    four or more, or more than one trivalent node.
    """
    hubs = [v for v in graph.nodes if graph.valence(v) >= 3]
    if not hubs:
        return None
    if len(hubs) > 1:
        raise UnsupportedGraphError(
            "no candidate relation for a tree with %d branch points" % len(hubs)
        )
    if graph.valence(hubs[0]) > 3:
        raise UnsupportedGraphError(
            "no candidate relation at a node of valence %d" % graph.valence(hubs[0])
        )
    grading = grading or graph.grading()
    return Polynomial({branch_term(graph, br, grading): 1 for br in graph.branches()})


def lead_term_of(graph, grading=None):
    """Lead term choice: the term of the shortest branch, ties broken by
    the smaller first node id."""
    grading = grading or graph.grading()
    branch = min(graph.branches(), key=lambda br: (len(br), br[0]))
    return branch_term(graph, branch, grading)


def presentation_from_graph(graph):
    """RingPresentation over the graph grading with the candidate
    relation (when one exists)."""
    grading = graph.grading()
    rel = relation_from_graph(graph, grading)
    if rel is None:
        return RingPresentation(grading, [], [])
    return RingPresentation(grading, [rel], [lead_term_of(graph, grading)])


def candidate_presentation(family, n):
    return presentation_from_graph(build_singularity(family, n))


def ambient_model(family, n):
    """Invariant-ring ambient data: generators, toric relations, and the
    hyperplane cuts whose pullbacks recover the candidate relation."""
    family = str(family).upper()
    gens = golden_generators(family, n)
    rels = golden_relations(family, n)
    if family == "A":
        cuts = []
    elif family == "D":
        if n % 2 == 0:
            k = n // 2
            cuts = [
                {
                    "name": "H",
                    "terms": [{"Z1": 1}, {"Z2": 1}, {"Z3": k - 1}],
                    "principal": True,
                }
            ]
        else:
            k = (n - 1) // 2
            cuts = [
                {
                    "name": "H1",
                    "terms": [{"Z1": k}, {"Z3": 1}, {"Z4": 1}],
                    "principal": False,
                },
                {
                    "name": "H2a",
                    "terms": [{"Z1": k - 1, "Z3": 1}, {"Z2": 2}, {"Z5": 1}],
                    "principal": True,
                },
                {
                    "name": "H2b",
                    "terms": [{"Z1": k - 1, "Z4": 1}, {"Z2": 2}, {"Z6": 1}],
                    "principal": True,
                },
            ]
    elif family == "E":
        terms = {
            6: [{"Z1": 2}, {"Z3": 1}, {"Z4": 1}],
            7: [{"Z1": 3}, {"Z2": 1}, {"Z4": 2}],
            8: [{"Z2": 5}, {"Z3": 3}, {"Z1": 2}],
        }[n]
        cuts = [{"name": "H", "terms": terms, "principal": True}]
    else:
        raise ParameterError("unknown family %r" % family)
    return {
        "family": family,
        "n": n,
        "generators": gens,
        "relations": rels,
        "cuts": cuts,
    }


def _substitute_term(gens, grading, term):
    out = grading.one()
    for name, e in term.items():
        out = out * (gens[name] ** e)
    return out


def pullback_factorization(family, n, cut_terms):
    """Substitute generator monomials into one cut, split off the
    greatest common monomial factor, and compare the residual with the
    candidate relation."""
    graph = build_singularity(family, n)
    grading = graph.grading()
    gens = dict(golden_generators(family, n))
    monos = [_substitute_term(gens, grading, term) for term in cut_terms]
    width = grading.width
    gcd_exps = tuple(min(m.exps[i] for m in monos) for i in range(width))
    from .rings import Monomial

    gcd = Monomial(gcd_exps)
    residual = Polynomial({m / gcd: 1 for m in monos})
    candidate = relation_from_graph(graph, grading)
    return {
        "gcd": gcd,
        "residual": residual,
        "matches_candidate": candidate is not None and residual == candidate,
    }


def verify_presentation(family, n):
    """Full candidate-presentation report: the relation, its lead, the
    ambient cuts and their pullback factorizations."""
    family = str(family).upper()
    graph = build_singularity(family, n)
    grading = graph.grading()
    model = ambient_model(family, n)
    gens = dict(model["generators"])
    rel = relation_from_graph(graph, grading)
    report = {
        "case": graph.label,
        "variables": list(grading.variables),
        "relation": grading.format_polynomial(rel) if rel is not None else None,
        "lead": grading.format_monomial(lead_term_of(graph, grading)) if rel is not None else None,
        "cuts": [],
    }
    ok = True
    if family == "A":
        # the ambient is a hypersurface: its toric relation must vanish
        # identically under substitution
        (lhs, rhs), = model["relations"]
        diff = Polynomial({_substitute_term(gens, grading, lhs): 1}) - Polynomial(
            {_substitute_term(gens, grading, rhs): 1}
        )
        report["hypersurface_substitution_zero"] = diff.is_zero()
        ok = diff.is_zero()
    for cut in model["cuts"]:
        fact = pullback_factorization(family, n, cut["terms"])
        report["cuts"].append(
            {
                "name": cut["name"],
                "principal": cut["principal"],
                "gcd": grading.format_monomial(fact["gcd"]),
                "residual": grading.format_polynomial(fact["residual"]),
                "matches_candidate": fact["matches_candidate"],
            }
        )
        ok = ok and fact["matches_candidate"]
    report["ok"] = ok
    return report
