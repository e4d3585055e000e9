import dataclasses
import logging
import time
from collections.abc import Iterator, Mapping
from concurrent.futures import ThreadPoolExecutor
from typing import Any

from charp_closure.src.config import EngineConfig, use_budget
from charp_closure.src.errors import CharpError, ConfigError, ResourceLimit, SessionTypeError, TooManyElements
from charp_closure.src.expressions import Expr, Name, evaluate
from charp_closure.src.frobenius import (
    bracket_commute_check,
    bracket_power,
    frobenius_closure,
    frobenius_membership,
    is_frobenius_closed,
)
from charp_closure.src.polyring import Polynomial, PolynomialRing, order_from_name
from charp_closure.src.quotient import (
    QuotientIdeal,
    RingPresentation,
    SubringPresentation,
    is_filter_regular_sequence,
    is_parameter_ideal,
    is_regular_sequence,
    is_system_of_parameters,
    quotient_ring,
    veronese,
)
from charp_closure.src.scalar import FieldDescriptor
from charp_closure.src.tightclosure import (
    MultiplierCertificate,
    TestElementStatus,
    briancon_skoda_check,
    colon_socle_bound,
    jacobian_test_element_candidates,
    make_multiplier,
    monomial_product_decomposition,
    power_identity_check,
    product_identity_check,
    rationality_conditions_check,
    special_part_membership,
    tight_membership,
)
from charp_closure.src.verdicts import (
    Certificate,
    CertificateKind,
    MembershipClaim,
    Status,
    Verdict,
    equality_certificate,
    inclusion_claims,
    separation_certificate,
)

from .dsl import (
    AUTO,
    CHECKS,
    CheckStmt,
    ElementDecl,
    IdealBracket,
    IdealDecl,
    IdealExpr,
    IdealGens,
    IdealMaximal,
    IdealPower,
    IdealProduct,
    IdealRef,
    IdealSum,
    PolyRingSpec,
    QuotientSpec,
    RingDecl,
    RingRef,
    RingSpec,
    Session,
    format_arg,
    ideal_from_expr,
    validate_session,
)
from .report import Report, ReportEntry, jsonable

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class RingContext:
    """A declared ring: where its ideals live, and the subring it presents if any"""

    name: str
    presentation: RingPresentation
    subring: SubringPresentation | None = None

    @property
    def ambient(self) -> PolynomialRing:
        return self.presentation.ambient

    def element(self, expr: Expr, elements: Mapping[str, Polynomial]) -> Polynomial:
        """Evaluate in the ring; subring elements are written in the parent's variables"""
        if self.subring is None:
            return evaluate(expr, self.ambient, elements)
        parent = self.subring.parent.ambient
        images = {name: self.subring.image(value) for name, value in elements.items()}
        f = evaluate(expr, parent, images)
        lifted = self.subring.lift(f)
        if lifted is None:
            raise SessionTypeError(f"{f} is not in the subring {self.name}", expr.line, expr.column)
        return lifted


def referenced_names(node: Any) -> set[str]:
    """Every declared name a syntax node mentions"""
    if isinstance(node, Name):
        return {node.name}
    if isinstance(node, (IdealRef, RingRef)):
        return {node.name}
    if isinstance(node, IdealMaximal):
        return {node.ring} if node.ring else set()
    if isinstance(node, (tuple, list)):
        return set().union(*(referenced_names(n) for n in node)) if node else set()
    if dataclasses.is_dataclass(node):
        out: set[str] = set()
        for f in dataclasses.fields(node):
            out |= referenced_names(getattr(node, f.name))
        return out
    return set()


def effective_config(session: Session, config: EngineConfig, overrides: Mapping[str, Any] | None = None) -> EngineConfig:
    """Session `set` statements over the loaded config, explicit overrides on top"""
    merged = config._replace(**session.settings)
    merged = merged._replace(**{k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        order_from_name(merged.order)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if merged.emax < 0 or merged.window < 1 or merged.probe_degree < 1:
        raise ConfigError("emax must be >= 0, window and probe_degree >= 1")
    if merged.max_basis_size < 1 or merged.max_degree < 1:
        raise ConfigError("resource budget values must be positive")
    return merged


class SessionRunner:
    def __init__(self, session: Session, config: EngineConfig) -> None:
        self.session = session
        self.config = config
        self.scope = validate_session(session)
        self.order = order_from_name(config.order)
        self.rings: dict[str, RingContext] = {}
        self.ideals: dict[str, QuotientIdeal] = {}
        self.elements: dict[str, Polynomial] = {}
        # declarations that hit the resource budget, with the reason
        self.failed: dict[str, str] = {}

    # --- declarations -----------------------------------------------------------------------

    def _ring_from_spec(self, name: str, spec: RingSpec) -> RingContext:
        if isinstance(spec, RingRef):
            return dataclasses.replace(self.rings[spec.name], name=name)
        if isinstance(spec, PolyRingSpec):
            field = FieldDescriptor(spec.field.characteristic, spec.field.parameters)
            ambient = PolynomialRing(field, spec.variables, self.order)
            return RingContext(name, RingPresentation(ambient))
        base = self._ring_from_spec(name, spec.base)
        if isinstance(spec, QuotientSpec):
            ambient = base.ambient
            relations = list(base.presentation.relations.generators)
            relations += [evaluate(r, ambient) for r in spec.relations]
            return RingContext(name, quotient_ring(ambient, relations))
        sub = veronese(base.presentation, spec.degree)
        return RingContext(name, sub.presentation, sub)

    def _elements_of(self, ring: str) -> dict[str, Polynomial]:
        return {k: v for k, v in self.elements.items() if self.scope.owner.get(k) == ring}

    def ideal(self, expr: IdealExpr, ctx: RingContext) -> QuotientIdeal:
        if isinstance(expr, IdealGens):
            elements = self._elements_of(ctx.name)
            return ctx.presentation.ideal([ctx.element(g, elements) for g in expr.generators])
        if isinstance(expr, IdealMaximal):
            return ctx.presentation.maximal_ideal()
        if isinstance(expr, IdealRef):
            return self.ideals[expr.name]
        if isinstance(expr, IdealSum):
            return self.ideal(expr.left, ctx) + self.ideal(expr.right, ctx)
        if isinstance(expr, IdealProduct):
            return self.ideal(expr.left, ctx) * self.ideal(expr.right, ctx)
        if isinstance(expr, IdealBracket):
            e, q = 0, expr.q
            while q > 1:
                q //= ctx.presentation.characteristic
                e += 1
            return bracket_power(self.ideal(expr.base, ctx), e)
        if isinstance(expr, IdealPower):
            return self.ideal(expr.base, ctx).power(expr.exponent)
        raise TypeError(f"not an ideal expression: {expr!r}")

    def build(self) -> None:
        """Evaluate every declaration in order; budget overruns are remembered, not raised"""
        for index, stmt in enumerate(self.session.statements):
            if not isinstance(stmt, (RingDecl, IdealDecl, ElementDecl)):
                continue
            ring = self.scope.resolved.get(index)
            blocked = (referenced_names(stmt) | ({ring} if ring else set())) & set(self.failed)
            if blocked:
                name = sorted(blocked)[0]
                self.failed[stmt.name] = f"depends on {name}: {self.failed[name]}"
                continue
            try:
                if isinstance(stmt, RingDecl):
                    self.rings[stmt.name] = self._ring_from_spec(stmt.name, stmt.spec)
                elif isinstance(stmt, IdealDecl):
                    self.ideals[stmt.name] = self.ideal(stmt.expr, self.rings[ring])
                else:
                    ctx = self.rings[ring]
                    self.elements[stmt.name] = ctx.element(stmt.expr, self._elements_of(ring))
            except ResourceLimit as e:
                logger.warning(f"[SESSION] {stmt.name}: {e}")
                self.failed[stmt.name] = str(e)

    # --- checks -------------------------------------------------------------------------------

    def _arguments(self, stmt: CheckStmt, ctx: RingContext) -> list[Any]:
        elements = self._elements_of(ctx.name)
        values = []
        for kind, arg in zip(CHECKS[stmt.name], stmt.args):
            kind = kind.rstrip("?")
            if kind == "element":
                values.append(ctx.element(arg, elements))
            elif kind == "ideal":
                values.append(self.ideal(ideal_from_expr(arg), ctx))
            elif kind == "ring":
                values.append(self.rings[arg.name])
            else:
                values.append(arg.value)
        return values

    def _multiplier(self, stmt: CheckStmt, ctx: RingContext, required: bool) -> MultiplierCertificate | None:
        value = stmt.options.multiplier
        if value is None and not required:
            return None
        if value is None or value == AUTO:
            return jacobian_test_element_candidates(ctx.presentation)[0]
        status = TestElementStatus.ASSERTED if stmt.options.multiplier_tested else TestElementStatus.NONE
        return make_multiplier(ctx.element(value, self._elements_of(ctx.name)), ctx.presentation, status)

    def _probes(self, stmt: CheckStmt, ctx: RingContext) -> list[Polynomial]:
        elements = self._elements_of(ctx.name)
        return [ctx.element(x, elements) for x in stmt.options.probes]

    def evaluate_check(self, index: int, stmt: CheckStmt) -> Verdict:
        ctx = self.rings[self.scope.resolved[index]]
        args = self._arguments(stmt, ctx)
        options = stmt.options
        emax = options.emax if options.emax is not None else self.config.emax
        window = options.window if options.window is not None else self.config.window
        handler = getattr(self, f"check_{stmt.name}")
        verdict = handler(ctx, stmt, args, emax, window)
        witness = verdict.certificate.witness
        if ctx.subring is not None and witness is not None:
            verdict.details["witness_in_parent"] = str(ctx.subring.image(witness))
        return verdict

    def check_member(self, ctx, stmt, args, emax, window) -> Verdict:
        x, ideal = args
        inside = ideal.contains(x)
        claim = MembershipClaim(x, ideal.lift, inside)
        if inside:
            return Verdict(Status.IN, Certificate(CertificateKind.FROBENIUS, (claim,), exponent=0), f"{x} lies in {ideal}")
        return Verdict(
            Status.OUT, Certificate(CertificateKind.WITNESS, (claim,), witness=x), f"{x} is not in {ideal}"
        )

    def check_element_equal(self, ctx, stmt, args, emax, window) -> Verdict:
        f, g = args
        ring = ctx.presentation
        equal = ring.equal(f, g)
        claim = MembershipClaim(f - g, ring.relations, equal)
        details = {"left": str(ring.reduce(f)), "right": str(ring.reduce(g))}
        status = Status.PASS if equal else Status.FAIL
        narrative = "equal modulo the relations" if equal else "different modulo the relations"
        return Verdict(status, Certificate(CertificateKind.IDEAL_EQUALITY, (claim,)), narrative, details)

    def check_ideal_equal(self, ctx, stmt, args, emax, window) -> Verdict:
        a, b = args
        if a == b:
            return Verdict(Status.PASS, equality_certificate(a.lift, b.lift), "the ideals are equal")
        return Verdict(Status.FAIL, separation_certificate(a.lift, b.lift), "the ideals differ")

    def check_parameters(self, ctx, stmt, args, emax, window) -> Verdict:
        (ideal,) = args
        ring = ctx.presentation
        details: dict[str, Any] = {"dimension": ring.dimension, "generators": len(ideal.generators)}
        try:
            details["partial_system"] = is_system_of_parameters(ideal.generators, ring)
        except TooManyElements as e:
            return Verdict(Status.FAIL, narrative=str(e), details=details)
        if is_parameter_ideal(ideal):
            return Verdict(Status.PASS, narrative="generated by a full system of parameters", details=details)
        return Verdict(Status.FAIL, narrative="not generated by a full system of parameters", details=details)

    def check_regular_sequence(self, ctx, stmt, args, emax, window) -> Verdict:
        (ideal,) = args
        if is_regular_sequence(ideal.generators, ctx.presentation):
            return Verdict(Status.PASS, narrative="the generators form a regular sequence")
        return Verdict(Status.FAIL, narrative="the generators do not form a regular sequence")

    def check_filter_regular(self, ctx, stmt, args, emax, window) -> Verdict:
        (ideal,) = args
        if is_filter_regular_sequence(ideal.generators, ctx.presentation):
            return Verdict(Status.PASS, narrative="the generators form a filter-regular sequence")
        return Verdict(Status.FAIL, narrative="the generators do not form a filter-regular sequence")

    def check_dimension(self, ctx, stmt, args, emax, window) -> Verdict:
        ring = args[0].presentation
        details = {"dimension": ring.dimension}
        if len(args) == 1 or args[1] == ring.dimension:
            return Verdict(Status.PASS, narrative=f"dim = {ring.dimension}", details=details)
        return Verdict(Status.FAIL, narrative=f"dim = {ring.dimension}, not {args[1]}", details=details)

    def check_frobenius_member(self, ctx, stmt, args, emax, window) -> Verdict:
        x, ideal = args
        return frobenius_membership(x, ideal, emax)

    def check_frobenius_closure(self, ctx, stmt, args, emax, window) -> Verdict:
        ideal = args[0]
        chain = frobenius_closure(ideal, emax, window)
        details = {
            "closure": str(chain.closure),
            "chain": [f"e={e}: {entry}" for e, entry in chain.entries],
            "stable": chain.stable,
        }
        if not chain.stable:
            return Verdict.unknown(emax, f"chain did not stabilize: {chain.summary()}", **details)
        closure = chain.closure
        if len(args) == 1:
            certificate = Certificate(CertificateKind.IDEAL_EQUALITY, inclusion_claims(ideal.lift, closure.lift))
            return Verdict(Status.PASS, certificate, chain.summary(), details)
        target = args[1]
        if closure == target:
            return Verdict(Status.PASS, equality_certificate(closure.lift, target.lift), chain.summary(), details)
        return Verdict(
            Status.FAIL, separation_certificate(closure.lift, target.lift), f"closure is {closure}, not {target}", details
        )

    def check_frobenius_closed(self, ctx, stmt, args, emax, window) -> Verdict:
        (ideal,) = args
        return is_frobenius_closed(ideal, emax, window, self._probes(stmt, ctx), self.config.probe_degree)

    def check_bracket_commute(self, ctx, stmt, args, emax, window) -> Verdict:
        (ideal,) = args
        return bracket_commute_check(ideal, emax, window)

    def check_tight_member(self, ctx, stmt, args, emax, window) -> Verdict:
        x, ideal = args
        return tight_membership(x, ideal, self._multiplier(stmt, ctx, required=True), emax)

    def check_special_part(self, ctx, stmt, args, emax, window) -> Verdict:
        x, ideal = args
        return special_part_membership(x, ideal, emax)

    def check_product_identity(self, ctx, stmt, args, emax, window) -> Verdict:
        q1, q2 = args
        return product_identity_check(
            q1,
            q2,
            emax,
            window,
            multiplier=self._multiplier(stmt, ctx, required=False),
            probes=self._probes(stmt, ctx),
            probe_degree=self.config.probe_degree,
        )

    def check_briancon_skoda(self, ctx, stmt, args, emax, window) -> Verdict:
        (q,) = args
        return briancon_skoda_check(
            q,
            self._multiplier(stmt, ctx, required=False),
            emax,
            window,
            probes=self._probes(stmt, ctx),
            probe_degree=self.config.probe_degree,
        )

    def check_colon_socle(self, ctx, stmt, args, emax, window) -> Verdict:
        colon = colon_socle_bound(args[0])
        details = {"colon": str(colon), "hypothesis": "q : m lies in q^* when R is Gorenstein and not F-rational"}
        if len(args) == 1:
            return Verdict(Status.PASS, narrative=f"q : m = {colon}", details=details)
        target = args[1]
        if colon == target:
            return Verdict(Status.PASS, equality_certificate(colon.lift, target.lift), f"q : m = {target}", details)
        return Verdict(
            Status.FAIL, separation_certificate(colon.lift, target.lift), f"q : m = {colon}, not {target}", details
        )

    def check_power_identity(self, ctx, stmt, args, emax, window) -> Verdict:
        (q,) = args
        return power_identity_check(q, emax, window, self._probes(stmt, ctx), self.config.probe_degree)

    def check_decomposition(self, ctx, stmt, args, emax, window) -> Verdict:
        q = args[0]
        return monomial_product_decomposition(q, args[1] if len(args) > 1 else 1)

    def check_rationality_conditions(self, ctx, stmt, args, emax, window) -> Verdict:
        q1, q2 = args
        return rationality_conditions_check(q1, q2, emax, window)

    def run_check(self, index: int, stmt: CheckStmt, scenario: str | None = None) -> ReportEntry:
        started = time.perf_counter()
        entry = {
            "index": index,
            "name": stmt.name,
            "scenario": scenario,
            "inputs": [format_arg(a) for a in stmt.args],
            "expected": stmt.options.expect,
        }
        blocked = (referenced_names(stmt) | {self.scope.resolved[index]}) & set(self.failed)
        try:
            if blocked:
                name = sorted(blocked)[0]
                raise ResourceLimit(f"declaration of {name} exceeded the budget: {self.failed[name]}")
            with use_budget(self.config.budget):
                verdict = self.evaluate_check(index, stmt)
                verified = verdict.verify()
        except ResourceLimit as e:
            verdict = Verdict(Status.RESOURCE_LIMIT, narrative=str(e))
            verified = True
        except (CharpError, ValueError) as e:
            verdict = Verdict(Status.UNKNOWN, narrative=f"not evaluated: {e}", details={"error": type(e).__name__})
            verified = True
        if not verified:
            logger.error(f"[SESSION] certificate of {stmt.name} (directive {index}) failed to replay")
        logger.info(f"[SESSION] {stmt.name}({', '.join(entry['inputs'])}): {verdict.status.value}")
        return ReportEntry(
            **entry,
            status=verdict.status,
            certificate=jsonable(verdict.certificate.to_dict()),
            details=jsonable(verdict.details),
            narrative=verdict.narrative,
            certificate_verified=verified,
            elapsed_ms=round((time.perf_counter() - started) * 1000, 3),
        )

    def checks(self) -> Iterator[tuple[int, CheckStmt]]:
        for index, stmt in enumerate(self.session.statements):
            if isinstance(stmt, CheckStmt):
                yield index, stmt

    def run(self, parallel: bool = False, scenario: str | None = None) -> list[ReportEntry]:
        self.build()
        checks = list(self.checks())
        if parallel and len(checks) > 1:
            with ThreadPoolExecutor(max_workers=min(8, len(checks))) as pool:
                return list(pool.map(lambda item: self.run_check(*item, scenario), checks))
        return [self.run_check(index, stmt, scenario) for index, stmt in checks]


def run_session(
    session: Session,
    config: EngineConfig | None = None,
    overrides: Mapping[str, Any] | None = None,
    parallel: bool = False,
) -> Report:
    """Run every check of a session under the effective configuration"""
    config = effective_config(session, config or EngineConfig(), overrides)
    with use_budget(config.budget):
        entries = SessionRunner(session, config).run(parallel)
    return Report(config=config._asdict(), entries=entries)
