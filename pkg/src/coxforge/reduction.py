"""Divisor reduction procedures with step-by-step cokernel audits.

Multidegrees are integer tuples indexed like ``graph.nodes``. Three
procedures move a degree into normal position:

* ``reduce_to_nef`` clears negative coordinates by subtracting the
  intersection-matrix column at the order-lowest negative spot.
* ``reduce_nef_to_basic`` runs an add phase (add a single curve where a
  coordinate is at least 2, else add the chain between the order-least
  eligible pair of 1's) until at most a single coordinate remains and
  equals 1, then shifts that 1 step by step to a branch-end leaf.
* the base case handles terminal degrees k*e_leaf through a quotient
  presentation and a seed/period monomial family.

Every step carries a combinatorial expected cokernel dimension (a
section count over the step's chain). ``cokernel_dimension`` recomputes
that dimension by exact linear algebra on truncated graded pieces, so a
full audit certifies each step of a reduction independently.
"""

from fractions import Fraction

from .cox import presentation_from_graph, relation_from_graph
from .errors import (
    HypothesisViolationError,
    ParameterError,
    ResourceCapError,
)
from .linalg import rank_sparse
from .rings import (
    Monomial,
    Polynomial,
    RingPresentation,
    graded_piece_basis,
    normal_form,
)

DEFAULT_STEP_CAP = 10000
DEFAULT_COKERNEL_CAP = 24
MAX_COKERNEL_CAP = 40


class ReductionStep:
    """One move of a reduction procedure.

    ``nodes`` identifies the step (the curve for SubtractCurve and
    AddCurve, the endpoint pair for AddChain and ShiftToLeaf); ``curves``
    lists every node whose intersection-matrix column was applied. The
    columns are added for AddCurve and AddChain, subtracted otherwise.
    """

    __slots__ = (
        "kind",
        "nodes",
        "curves",
        "degree_before",
        "degree_after",
        "expected_cokernel_dim",
        "actual_dim",
        "stabilized",
    )

    def __init__(self, kind, nodes, curves, degree_before, degree_after):
        self.kind = kind
        self.nodes = tuple(nodes)
        self.curves = tuple(curves)
        self.degree_before = tuple(degree_before)
        self.degree_after = tuple(degree_after)
        self.expected_cokernel_dim = None
        self.actual_dim = None
        self.stabilized = None

    def adds_curves(self):
        return self.kind in ("AddCurve", "AddChain")

    def to_dict(self):
        return {
            "kind": self.kind,
            "nodes": list(self.nodes),
            "curves": list(self.curves),
            "degree_after": list(self.degree_after),
            "expected_dim": self.expected_cokernel_dim,
            "actual_dim": self.actual_dim,
            "stabilized": self.stabilized,
        }

    def __repr__(self):
        return "ReductionStep(%s, nodes=%r, %r -> %r)" % (
            self.kind,
            self.nodes,
            self.degree_before,
            self.degree_after,
        )


class ReductionTrace:
    """A run of one reduction procedure.

    ``measures`` lists the S-values of the states covered by the
    termination measure (the add phase); the shift phase sits outside
    that argument and is excluded.
    """

    __slots__ = ("initial", "terminal", "steps", "terminated", "measures")

    def __init__(self, initial, terminal, steps, terminated, measures=()):
        self.initial = tuple(initial)
        self.terminal = tuple(terminal)
        self.steps = tuple(steps)
        self.terminated = terminated
        self.measures = tuple(measures)

    def __len__(self):
        return len(self.steps)

    def validate(self, graph):
        """Recompute the degree bookkeeping of every step."""
        cols = _columns(graph)
        d = self.initial
        for step in self.steps:
            if step.degree_before != d:
                raise ParameterError("trace steps do not compose")
            delta = _sum_columns(cols, step.curves, graph)
            if step.adds_curves():
                expect = _vec_add(d, delta)
            else:
                expect = _vec_sub(d, delta)
            if step.degree_after != expect:
                raise ParameterError(
                    "step delta mismatch at %r" % (step,)
                )
            d = step.degree_after
        if d != self.terminal:
            raise ParameterError("terminal does not match the last step")
        return True

    def to_dict(self):
        ok = self.terminated and all(
            s.actual_dim is None
            or (s.stabilized and s.actual_dim == s.expected_cokernel_dim)
            for s in self.steps
        )
        return {
            "initial": list(self.initial),
            "steps": [s.to_dict() for s in self.steps],
            "terminal": list(self.terminal),
            "measures": [str(m) for m in self.measures],
            "terminated": self.terminated,
            "ok": ok,
        }


class BaseCaseFamily:
    """Seed and period monomials spanning one basic graded piece."""

    __slots__ = ("seed", "period", "leaf", "k")

    def __init__(self, seed, period, leaf, k):
        self.seed = seed
        self.period = period
        self.leaf = leaf
        self.k = k


def _columns(graph):
    m = graph.intersection_matrix()
    return {v: tuple(row[i] for row in m) for i, v in enumerate(graph.nodes)}


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _sum_columns(cols, nodes, graph):
    total = (0,) * len(graph.nodes)
    for v in nodes:
        total = _vec_add(total, cols[v])
    return total


def _check_degree(degree, graph):
    d = tuple(degree)
    if len(d) != len(graph.nodes):
        raise ParameterError(
            "degree has %d coordinates, graph has %d nodes"
            % (len(d), len(graph.nodes))
        )
    return d


def s_measure(degree, graph=None):
    """Termination measure: half weight on the coordinates of nodes 1
    and 2, full weight elsewhere."""
    if graph is None:
        halves = {1, 2}
    else:
        halves = {
            graph.node_index(v) for v in (1, 2) if v in graph.nodes
        }
    total = Fraction(0)
    for i, c in enumerate(degree):
        total += Fraction(c, 2) if i in halves else Fraction(c)
    return total


def is_basic(degree, graph):
    """Zero, or a positive multiple of a unit at a branch-end leaf."""
    nonzero = [(i, c) for i, c in enumerate(degree) if c != 0]
    if not nonzero:
        return True
    if len(nonzero) > 1:
        return False
    i, c = nonzero[0]
    if c < 0:
        return False
    node = graph.nodes[i]
    if graph.center() is None:
        return node in graph.leaves()
    return node in graph.branch_ends()


def h0_tree(chain_degrees):
    """Section count of a degree vector on a chain of rational curves:
    1 + sum, or None when a negative degree puts the chain outside the
    supported shapes."""
    degs = list(chain_degrees)
    if not degs:
        raise ParameterError("empty chain")
    if any(c < 0 for c in degs):
        return None
    return 1 + sum(degs)


def reduce_to_nef(degree, graph, step_cap=DEFAULT_STEP_CAP):
    """Subtract the column at the order-lowest negative coordinate until
    the degree is componentwise nonnegative."""
    d = _check_degree(degree, graph)
    order = graph.curve_order()
    idx = {v: graph.node_index(v) for v in order}
    cols = _columns(graph)
    steps = []
    while True:
        neg = next((v for v in order if d[idx[v]] < 0), None)
        if neg is None:
            return ReductionTrace(degree, d, steps, True)
        if len(steps) >= step_cap:
            return ReductionTrace(degree, d, steps, False)
        after = _vec_sub(d, cols[neg])
        step = ReductionStep("SubtractCurve", (neg,), (neg,), d, after)
        step.expected_cokernel_dim = expected_cokernel_dim(step, graph)
        steps.append(step)
        d = after


def _shift_target(graph, node):
    center = graph.center()
    if center is None:
        leaves = graph.leaves()
        return leaves[-1]
    if node == center:
        branch = sorted(graph.branches(), key=lambda ch: (len(ch), ch[0]))[-1]
        return branch[-1]
    return graph.branch_of(node)[-1]


def _eligible_pairs(d, ones, graph, idx, pos):
    for a in range(len(ones)):
        for b in range(a + 1, len(ones)):
            u, w = ones[a], ones[b]
            path = graph.path(u, w)
            if all(d[idx[v]] == 0 for v in path[1:-1]):
                key = tuple(sorted((pos[u], pos[w])))
                first, second = sorted((u, w), key=pos.get)
                yield key, first, second


def reduce_nef_to_basic(degree, graph, step_cap=DEFAULT_STEP_CAP):
    """Add phase (single curve at a coordinate >= 2, else the chain
    between the order-least eligible pair of 1's), then shift the last
    remaining 1 to a branch-end leaf."""
    d = _check_degree(degree, graph)
    if any(c < 0 for c in d):
        raise ParameterError("reduce_nef_to_basic needs a nef degree")
    order = graph.curve_order()
    idx = {v: graph.node_index(v) for v in order}
    pos = {v: k for k, v in enumerate(order)}
    cols = _columns(graph)
    steps = []
    measures = [s_measure(d, graph)]

    def push(kind, nodes, curves, after):
        step = ReductionStep(kind, nodes, curves, d, after)
        step.expected_cokernel_dim = expected_cokernel_dim(step, graph)
        steps.append(step)

    while not is_basic(d, graph):
        if len(steps) >= step_cap:
            return ReductionTrace(degree, d, steps, False, measures)
        big = next((v for v in order if d[idx[v]] >= 2), None)
        if big is not None:
            after = _vec_add(d, cols[big])
            push("AddCurve", (big,), (big,), after)
            d = after
            measures.append(s_measure(d, graph))
            continue
        ones = [v for v in order if d[idx[v]] == 1]
        if len(ones) >= 2:
            _, i, j = min(_eligible_pairs(d, ones, graph, idx, pos))
            chain = graph.path(i, j)
            after = _vec_add(d, _sum_columns(cols, chain, graph))
            push("AddChain", (i, j), chain, after)
            d = after
            measures.append(s_measure(d, graph))
            continue
        # a single coordinate equal to 1 remains: shift it to a leaf
        p = ones[0]
        j = _shift_target(graph, p)
        while p != j:
            if len(steps) >= step_cap:
                return ReductionTrace(degree, d, steps, False, measures)
            q = graph.path(p, j)[1]
            chain = graph.path(q, j)
            after = _vec_sub(d, _sum_columns(cols, chain, graph))
            push("ShiftToLeaf", (p, j), chain, after)
            d = after
            p = q
    return ReductionTrace(degree, d, steps, True, measures)


def expected_cokernel_dim(step, graph):
    """Combinatorial cokernel dimension of one step, from the section
    count over the step's chain. Raises when the step violates the
    hypotheses the count relies on."""
    idx = {v: graph.node_index(v) for v in graph.nodes}
    before = step.degree_before
    after = step.degree_after
    if step.kind == "SubtractCurve":
        (i,) = step.nodes
        if before[idx[i]] >= 0:
            raise HypothesisViolationError(
                "SubtractCurve needs a negative coordinate at node %d, got %d"
                % (i, before[idx[i]])
            )
        return 0
    if step.kind == "AddCurve":
        (i,) = step.nodes
        if any(c < 0 for c in before):
            raise HypothesisViolationError("AddCurve needs a nef degree")
        if before[idx[i]] < 2:
            raise HypothesisViolationError(
                "AddCurve needs coordinate >= 2 at node %d, got %d"
                % (i, before[idx[i]])
            )
        return before[idx[i]] - 1
    if step.kind == "AddChain":
        i, j = step.nodes
        chain = step.curves
        if any(c < 0 for c in before):
            raise HypothesisViolationError("AddChain needs a nef degree")
        if before[idx[i]] != 1:
            raise HypothesisViolationError(
                "AddChain needs coordinate 1 at node %d" % i
            )
        if before[idx[j]] < 1:
            raise HypothesisViolationError(
                "AddChain needs a positive coordinate at node %d" % j
            )
        if graph.valence(j) > 1 and before[idx[j]] != 1:
            raise HypothesisViolationError(
                "AddChain into interior node %d needs coordinate 1" % j
            )
        if any(before[idx[v]] != 0 for v in chain[1:-1]):
            raise HypothesisViolationError(
                "AddChain needs zeros strictly between nodes %d and %d" % (i, j)
            )
        restricted = [after[idx[v]] for v in chain]
        shape = [0] * (len(chain) - 1) + [before[idx[j]] - 1]
        if restricted != shape:
            raise HypothesisViolationError(
                "AddChain restricted degrees %r do not match the shape %r"
                % (restricted, shape)
            )
        return h0_tree(restricted)
    if step.kind == "ShiftToLeaf":
        _, j = step.nodes
        chain = step.curves
        q = chain[0]
        if any(c < 0 for c in after):
            raise HypothesisViolationError("ShiftToLeaf must land on a nef degree")
        if q == j:
            if after[idx[j]] < 2:
                raise HypothesisViolationError(
                    "ShiftToLeaf onto node %d needs coordinate >= 2 after" % j
                )
            return after[idx[j]] - 1
        if after[idx[q]] != 1:
            raise HypothesisViolationError(
                "ShiftToLeaf needs coordinate 1 at node %d after" % q
            )
        if after[idx[j]] < 1:
            raise HypothesisViolationError(
                "ShiftToLeaf needs a positive coordinate at node %d after" % j
            )
        if any(after[idx[v]] != 0 for v in chain[1:-1]):
            raise HypothesisViolationError(
                "ShiftToLeaf needs zeros strictly between nodes %d and %d"
                % (q, j)
            )
        return after[idx[q]] + after[idx[j]] - 1
    raise ParameterError("unknown step kind %r" % step.kind)


def _step_multiplier(step, grading):
    counts = {}
    for v in step.curves:
        name = "y%d" % v
        counts[name] = counts.get(name, 0) + 1
    return grading.monomial(counts)


def _quotient_dim(pres, mono, source, target, cap):
    # Work in the quotient's own monomial basis: the lead-free monomials
    # span each graded piece, and exact normal forms express the image
    # rows in that basis. Cutting relation multiples against a raw
    # monomial list instead leaves a window of unreduced monomials (the
    # relation terms differ in total degree), which plateaus at wrong
    # dimensions for several caps in a row.
    std = graded_piece_basis(pres, target, cap)
    index = {}
    for m in std:
        index[m] = len(index)
    rows = []
    budget = cap - mono.total()
    if budget >= 0:
        for s in graded_piece_basis(pres, source, budget):
            form = normal_form(Polynomial.from_monomial(s * mono), pres)
            row = {}
            for m, c in form.terms.items():
                if c.denominator != 1:
                    raise ParameterError("relation coefficients must be integral")
                if m not in index:
                    # a rewrite can climb past the cap; the monomial is
                    # still part of the basis, so give it a column
                    index[m] = len(index)
                row[index[m]] = int(c)
            if row:
                rows.append(row)
    return len(std) - rank_sparse(rows)


def cokernel_dimension(pres, step, cap=DEFAULT_COKERNEL_CAP):
    """Dimension of (target graded piece) / (image of multiplication by
    the step's chain monomial), both taken modulo the relations and
    truncated at total degree cap. Returns (dimension, stabilized) where
    stabilized means caps cap-1 and cap agree."""
    if cap > MAX_COKERNEL_CAP:
        raise ResourceCapError(
            "truncation cap %d exceeds the audit limit %d"
            % (cap, MAX_COKERNEL_CAP)
        )
    grading = pres.grading
    mono = _step_multiplier(step, grading)
    if step.adds_curves():
        source, target = step.degree_before, step.degree_after
    else:
        source, target = step.degree_after, step.degree_before
    shifted = _vec_add(grading.degree_of(mono), source)
    if shifted != tuple(target):
        raise ParameterError("step degrees are inconsistent with its curves")
    previous = _quotient_dim(pres, mono, source, target, cap - 1)
    current = _quotient_dim(pres, mono, source, target, cap)
    return current, previous == current


def audit_step(pres, step, graph, cap=DEFAULT_COKERNEL_CAP):
    """Fill in the actual cokernel dimension of a step and compare with
    the expected one. The cap escalates while the value is unstable, and
    also on disagreement, so that slow convergence is not mistaken for a
    failed step; a genuine failure stays a failure at the cap limit."""
    expected = step.expected_cokernel_dim
    if expected is None:
        expected = expected_cokernel_dim(step, graph)
        step.expected_cokernel_dim = expected
    c = cap
    while True:
        dim, stable = cokernel_dimension(pres, step, c)
        if stable and dim == expected:
            break
        if c + 4 > MAX_COKERNEL_CAP:
            if not stable:
                raise ResourceCapError(
                    "cokernel dimension did not stabilize within cap %d" % c,
                    partial={"dim": dim, "cap": c},
                )
            break
        c += 4
    step.actual_dim = dim
    step.stabilized = True
    return {
        "kind": step.kind,
        "nodes": list(step.nodes),
        "expected": expected,
        "actual": dim,
        "cap": c,
        "ok": dim == expected,
    }


def audit_add_curve(graph, node, k=2, cap=DEFAULT_COKERNEL_CAP, pres=None):
    """Audit a single AddCurve step from degree k*e_node. The expected
    dimension k-1 is the claim under test, so a mismatch is reported,
    not raised."""
    if k < 2:
        raise ParameterError("AddCurve needs a coordinate of at least 2")
    if pres is None:
        pres = presentation_from_graph(graph)
    cols = _columns(graph)
    before = tuple(k if v == node else 0 for v in graph.nodes)
    after = _vec_add(before, cols[node])
    step = ReductionStep("AddCurve", (node,), (node,), before, after)
    report = audit_step(pres, step, graph, cap)
    report["node"] = node
    report["k"] = k
    return report


def quotient_presentation(graph, leaf):
    """Presentation of the ring with the section variable at the given
    branch-end leaf set to zero: the variable is dropped and the
    relation loses the term it divides."""
    ends = graph.branch_ends() if graph.center() is not None else graph.leaves()
    if leaf not in ends:
        raise ParameterError("node %d is not a branch-end leaf" % leaf)
    names = [name for name, at in graph.leaf_variables if at == leaf]
    if len(names) != 1:
        raise ParameterError("leaf %d needs exactly one section variable" % leaf)
    grading = graph.grading()
    sub = grading.drop(names)
    cut = grading.index(names[0])

    def project(mono):
        return Monomial(
            tuple(e for i, e in enumerate(mono.exps) if i != cut)
        )

    rel = relation_from_graph(graph, grading)
    if rel is None:
        return RingPresentation(sub, [], [])
    kept = {
        project(m): c for m, c in rel.terms.items() if m.exps[cut] == 0
    }
    reduced = Polynomial(kept)
    remaining = [br for br in graph.branches() if br[-1] != leaf]
    short = min(remaining, key=lambda br: (len(br), br[0]))
    lead_nodes = {graph.curve_variable(v): t for t, v in enumerate(short, start=1)}
    end_names = [name for name, at in graph.leaf_variables if at == short[-1]]
    lead_nodes[end_names[0]] = len(short) + 1
    lead = sub.monomial(lead_nodes)
    if lead not in reduced.terms:
        raise ParameterError("quotient relation lost its lead term")
    return RingPresentation(sub, [reduced], [lead])


def base_case_family(graph, leaf, k, cap=8, cap_limit=64):
    """Seed and period monomials for the graded piece of degree
    k*e_leaf in the quotient presentation, found by enumerating the
    piece until two basis elements appear."""
    if k < 1:
        raise ParameterError("k must be positive")
    qp = quotient_presentation(graph, leaf)
    target = tuple(k * c for c in graph.unit_degree(leaf))
    basis = []
    while len(basis) < 2:
        if cap > cap_limit:
            raise ResourceCapError(
                "no two basis elements of degree %r below total degree %d"
                % (target, cap_limit),
                partial=[str(m) for m in basis],
            )
        basis = graded_piece_basis(qp, target, cap)
        cap += 4
    seed, second = basis[0], basis[1]
    if not seed.divides(second):
        raise ParameterError("second basis element is not a seed multiple")
    period = second / seed
    if qp.grading.degree_of(period) != (0,) * len(graph.nodes):
        raise ParameterError("period monomial is not of degree zero")
    if qp.grading.degree_of(seed) != target:
        raise ParameterError("seed degree mismatch")
    return BaseCaseFamily(seed, period, leaf, k)


def base_case_audit(graph, leaf, k, a_max=3):
    """Check that the basic graded piece is spanned by the geometric
    family seed * period^a, up to the truncation the family reaches."""
    fam = base_case_family(graph, leaf, k)
    qp = quotient_presentation(graph, leaf)
    target = tuple(k * c for c in graph.unit_degree(leaf))
    members = [fam.seed * (fam.period ** a) for a in range(a_max + 1)]
    forms = [normal_form(Polynomial.from_monomial(m), qp) for m in members]
    single = all(
        len(f.terms) == 1 and abs(next(iter(f.terms.values()))) == 1
        for f in forms
    )
    report = {
        "case": graph.label,
        "leaf": leaf,
        "k": k,
        "a_max": a_max,
        "seed": qp.grading.format_monomial(fam.seed),
        "period": qp.grading.format_monomial(fam.period),
        "single_monomial_forms": single,
        "ok": False,
    }
    if not single:
        return report
    monos = [next(iter(f.terms)) for f in forms]
    if len(set(monos)) != len(monos):
        report["distinct"] = False
        return report
    cap = max(m.total() for m in monos)
    basis = graded_piece_basis(qp, target, cap)
    report["family"] = [qp.grading.format_monomial(m) for m in monos]
    report["basis"] = [qp.grading.format_monomial(m) for m in basis]
    report["ok"] = set(basis) == set(monos)
    return report


def full_equivalence_audit(
    graph,
    degree,
    cap=DEFAULT_COKERNEL_CAP,
    step_cap=DEFAULT_STEP_CAP,
    a_max=2,
):
    """Reduce a degree to nef and then to basic, audit the cokernel
    dimension of every step against the combinatorial expectation, and
    finish with the base-case family check where it applies."""
    d = _check_degree(degree, graph)
    pres = presentation_from_graph(graph)
    nef = reduce_to_nef(d, graph, step_cap)
    report = {
        "case": graph.label,
        "initial": list(d),
        "terminated": nef.terminated,
        "steps": [],
        "base_case": None,
        "ok": False,
    }
    basic = None
    if nef.terminated:
        basic = reduce_nef_to_basic(nef.terminal, graph, step_cap)
        report["terminated"] = basic.terminated
    all_steps = list(nef.steps) + (list(basic.steps) if basic else [])
    audits_ok = True
    if report["terminated"]:
        # a runaway trace is reported as such, not audited step by step
        for step in all_steps:
            audit = audit_step(pres, step, graph, cap)
            report["steps"].append(audit)
            audits_ok = audits_ok and audit["ok"]
    if basic is not None and basic.terminated:
        report["terminal"] = list(basic.terminal)
        nonzero = [c for c in basic.terminal if c]
        is_d_type = graph.label is not None and graph.label.startswith("D")
        if nonzero and is_d_type:
            leaf = graph.nodes[
                next(i for i, c in enumerate(basic.terminal) if c)
            ]
            base = base_case_audit(graph, leaf, nonzero[0], a_max)
            report["base_case"] = base
            audits_ok = audits_ok and base["ok"]
    report["ok"] = bool(report["terminated"] and audits_ok)
    return report
