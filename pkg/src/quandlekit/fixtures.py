"""Bundled diagrams and systems for the CLI and the test suite.

The handcuff-style fixtures (mlf, muf, mwf, mwuf) are pinned by their
Wirtinger presentations; the athlete pair is a handcuff whose hoop circle
threads both finger loops (happy) or only one (unhappy).
"""

from __future__ import annotations

from .diagrams import Diagram, parse_diagram
from .systems import AxetData, SystemData, g_family_system, quandle_system
from .tables import (
    OperationTable,
    cyclic_group,
    dihedral_quandle,
    symmetric_group,
    trivial_quandle,
)

DIAGRAMS: dict[str, str] = {
    "unknot": "arcs 1\n",
    "trefoil": (
        "arcs 3\n"
        "crossing over=0 under_in=1 under_out=2 sign=+\n"
        "crossing over=1 under_in=2 under_out=0 sign=+\n"
        "crossing over=2 under_in=0 under_out=1 sign=+\n"
    ),
    "hopf": (
        "arcs 2\n"
        "crossing over=0 under_in=1 under_out=1 sign=+\n"
        "crossing over=1 under_in=0 under_out=0 sign=+\n"
    ),
    "theta": (
        "arcs 3\n"
        "vertex ends=0:in,1:in,2:out\n"
        "vertex ends=1:out,0:out,2:in\n"
    ),
    # two-vertex handcuff, finger loops Hopf-linked through the loop arcs
    "mlf": (
        "arcs 5\n"
        "crossing over=2 under_in=0 under_out=3 sign=+\n"
        "crossing over=3 under_in=2 under_out=4 sign=+\n"
        "vertex ends=0:out,3:in,1:out\n"
        "vertex ends=1:in,4:in,2:out\n"
    ),
    # flat handcuff: same graph, fingers unlinked
    "muf": (
        "arcs 3\n"
        "vertex ends=0:in,1:out,0:out\n"
        "vertex ends=2:out,1:in,2:in\n"
    ),
    # handcuff with linked finger loops plus a circle around the bridge
    "mwf": (
        "arcs 7\n"
        "crossing over=2 under_in=0 under_out=3 sign=+\n"
        "crossing over=3 under_in=2 under_out=4 sign=+\n"
        "crossing over=6 under_in=1 under_out=5 sign=+\n"
        "crossing over=1 under_in=6 under_out=6 sign=+\n"
        "vertex ends=0:out,3:in,1:out\n"
        "vertex ends=5:in,4:in,2:out\n"
    ),
    # flat handcuff with a disjoint circle
    "mwuf": (
        "arcs 4\n"
        "vertex ends=0:in,1:in,0:out\n"
        "vertex ends=1:out,2:in,2:out\n"
    ),
    # handcuff whose hoop circle threads both finger loops
    "athlete-happy": (
        "arcs 7\n"
        "crossing over=0 under_in=5 under_out=6 sign=+\n"
        "crossing over=6 under_in=0 under_out=1 sign=+\n"
        "crossing over=3 under_in=6 under_out=5 sign=+\n"
        "crossing over=5 under_in=3 under_out=4 sign=+\n"
        "vertex ends=1:in,2:out,0:out\n"
        "vertex ends=4:in,2:in,3:out\n"
    ),
    # same handcuff, hoop threading only one loop
    "athlete-unhappy": (
        "arcs 5\n"
        "crossing over=2 under_in=4 under_out=4 sign=+\n"
        "crossing over=4 under_in=2 under_out=3 sign=+\n"
        "vertex ends=0:in,1:out,0:out\n"
        "vertex ends=3:in,1:in,2:out\n"
    ),
}


def diagram(name: str) -> Diagram:
    if name not in DIAGRAMS:
        raise KeyError(f"no bundled diagram {name!r}")
    return parse_diagram(DIAGRAMS[name])


def list_diagrams() -> list[str]:
    return sorted(DIAGRAMS)


def _t3r3z2() -> SystemData:
    return g_family_system((trivial_quandle(3), dihedral_quandle(3)), cyclic_group(2))


def _t2t2z2() -> SystemData:
    return g_family_system((trivial_quandle(2), trivial_quandle(2)), cyclic_group(2))


def _r3() -> SystemData:
    return quandle_system(dihedral_quandle(3))


def _s3point() -> SystemData:
    grp = symmetric_group(3)
    return g_family_system(tuple(trivial_quandle(1) for _ in range(grp.size)), grp)


def _broken_tc4() -> SystemData:
    """The Z2 dihedral family with f shifted by one: every structural
    condition survives except additivity of f, which fails everywhere."""
    return SystemData(
        x_size=3,
        g_size=2,
        star=(trivial_quandle(3), dihedral_quandle(3)),
        f_map=((1, 0), (1, 0)),
        otimes=OperationTable(2, ((0, 0), (1, 1))),
        oplus=OperationTable(2, ((0, 1), (1, 0))),
        rho=((0, 1), (0, 1), (0, 1)),
    )


SYSTEM_BUILDERS = {
    "t3r3z2": _t3r3z2,
    "t2t2z2": _t2t2z2,
    "r3": _r3,
    "s3point": _s3point,
    "broken-tc4": _broken_tc4,
}


def system(name: str) -> SystemData:
    if name not in SYSTEM_BUILDERS:
        raise KeyError(f"no bundled system {name!r}")
    return SYSTEM_BUILDERS[name]()


def list_systems() -> list[str]:
    return sorted(SYSTEM_BUILDERS)


def axet_z2_s3() -> AxetData:
    """Z2 sending each point of a 3-element set to the transposition that
    fixes it, inside the full symmetric group action."""
    s3 = symmetric_group(3)
    perms = {}
    import itertools

    for i, p in enumerate(sorted(itertools.permutations(range(3)))):
        perms[p] = i
    tau = (
        (perms[(0, 1, 2)], perms[(0, 2, 1)]),
        (perms[(0, 1, 2)], perms[(2, 1, 0)]),
        (perms[(0, 1, 2)], perms[(1, 0, 2)]),
    )
    action = tuple(sorted(itertools.permutations(range(3))))
    return AxetData(
        s_group=cyclic_group(2),
        g_group=s3,
        action=action,
        tau=tau,
    )
