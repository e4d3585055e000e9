"""Built-in scenarios with their stored expected outcomes; any drift fails the run."""

from charp_closure.src.config import EngineConfig

from .dsl import parse_session
from .report import Report
from .runner import run_session

HYPERSURFACE = """\
# x^2 + y^3 + z^5 over F_2: (y, z) is a parameter ideal that is not Frobenius closed
ring R = quotient(poly(F(2), [x, y, z]), [x^2 + y^3 + z^5]);
ideal q = ideal(y, z);
ideal m = maximal(R);
ideal m2 = m^[2];
ideal q2 = q^[2];
check dimension(R, 2) expect PASS;
check parameters(q) expect PASS;
check frobenius_member(x, q) emax 1 expect IN;
check frobenius_closed(q) expect OUT;
check ideal_equal(m2, q2) expect PASS;
check colon_socle(q, m) expect PASS;
check frobenius_closure(q, m) window 2 expect PASS;
"""

ONE_DIMENSIONAL = """\
# two lines crossing, over F_2(u): products of a generator with its Frobenius powers
set max_degree = 512;
ring R = quotient(poly(F(2, [u]), [x, y]), [x*y]);
check element_equal((x + u*y)*(x^2 + u^2*y^2), x^3 + u^3*y^3) expect PASS;
check element_equal((x + u*y^2)*(x^2 + u^2*y^4), x^3 + u^3*y^6) expect PASS;
check element_equal((x^2 + u*y^3)*(x^8 + u^4*y^12), x^10 + u^5*y^15) expect PASS;
ideal g1 = ideal((x + u*y)*(x^2 + u^2*y^2));
ideal g2 = ideal((x + u*y^2)*(x^2 + u^2*y^4));
ideal g3 = ideal((x^2 + u*y^3)*(x^8 + u^4*y^12));
check tight_member(x^3, g1) using c = x + y emax 4 expect UNKNOWN;
check tight_member(x^3, g2) using c = x + y emax 4 expect UNKNOWN;
check tight_member(x^10, g3) using c = x + y emax 4 expect UNKNOWN;
"""

VERONESE = """\
# degree-2 Veronese of a conic over F_2(u, v): F-rational but not F-pure
ring S = quotient(poly(F(2, [u, v]), [x, y, z]), [x^2 + u*y^2 + v*z^2]);
ring R = veronese(S, 2);
check dimension(R, 2) expect PASS;
ideal q1 = ideal(x^2, y^2);
ideal q2 = ideal(x*y, z^2);
ideal p = q1 * q2;
ideal p2 = p^[2];
element w = y*z^3;
check parameters(q1) expect PASS;
check parameters(q2) expect PASS;
check member(w, p) expect OUT;
check member(w^2, p2) expect IN;
check frobenius_closed(p) emax 1 probes [w] expect OUT;
check product_identity(q1, q2) emax 1 probes [w] expect FAIL;
"""

SCENARIOS: dict[str, str] = {
    "hypersurface-255": HYPERSURFACE,
    "one-dim-xy": ONE_DIMENSIONAL,
    "veronese-F2uv": VERONESE,
}


def run_scenarios(config: EngineConfig | None = None, parallel: bool = False) -> Report:
    """Run every built-in scenario; entries keep their directive index and carry the scenario name"""
    config = config or EngineConfig()
    entries = []
    for name, text in SCENARIOS.items():
        report = run_session(parse_session(text), config, parallel=parallel)
        entries.extend(entry.model_copy(update={"scenario": name}) for entry in report.entries)
    return Report(config=config._asdict(), entries=entries)
