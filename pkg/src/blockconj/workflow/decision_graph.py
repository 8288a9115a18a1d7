import logging
from functools import lru_cache
from typing import Any, Dict, Optional, TypedDict

from langgraph.graph import END, StateGraph

# =========================
# CONSTRUCTIONS
# =========================
from blockconj.constructions.block_conjugacy import (
    Conjugate,
    NotBlockConjugate,
    Trichotomy,
    TwoBlockOnly,
    conjugacy_witness,
    construct_two_block,
)
from blockconj.constructions.certificate_evaluator import CertificateEvaluator
from blockconj.constructions.lmt_correspondence import Automorphism, EigenData, matrix_to_ideal

# =========================
# ROUTING
# =========================
from blockconj.policies.decision_policy import DecisionPolicy

from blockconj.errors import VerificationError
from blockconj.tools.ideal_arith import is_weakly_equivalent

logger = logging.getLogger(__name__)


# =========================
# STATE
# =========================
class DecisionState(TypedDict, total=False):
    A: Automorphism
    B: Automorphism
    bound: int
    seed: int
    source: Optional[EigenData]
    target: Optional[EigenData]
    weakly_equivalent: Optional[bool]
    searched: bool
    route: Optional[str]
    witness: Optional[Any]
    verdict: Optional[Any]
    evaluation: Optional[Dict]


def build_decision_graph(policy: Optional[DecisionPolicy] = None, evaluator: Optional[CertificateEvaluator] = None):
    """Flow: ideals → router → (not_block | arith_search → conjugate | two_block) → evaluator."""
    policy = policy or DecisionPolicy(debug=True)
    evaluator = evaluator or CertificateEvaluator()

    # =========================
    # NODES
    # =========================
    def ideals_node(state: DecisionState):
        return {"source": matrix_to_ideal(state["A"]), "target": matrix_to_ideal(state["B"])}

    def router_node(state: DecisionState):
        weak = is_weakly_equivalent(state["source"].ideal, state["target"].ideal)
        route = policy.route({**state, "weakly_equivalent": weak})
        logger.debug("[Router] → %s", route)
        return {"weakly_equivalent": weak, "route": route}

    def not_block_node(state: DecisionState):
        return {"verdict": NotBlockConjugate()}

    def arith_search_node(state: DecisionState):
        witness = conjugacy_witness(state["A"], state["B"], state["bound"], state["source"], state["target"])
        route = policy.route({**state, "searched": True, "witness": witness})
        return {"witness": witness, "searched": True, "route": route}

    def conjugate_node(state: DecisionState):
        return {"verdict": Conjugate(state["witness"])}

    def two_block_node(state: DecisionState):
        return {"verdict": TwoBlockOnly(construct_two_block(state["A"], state["B"], state["seed"]))}

    def evaluator_node(state: DecisionState):
        result = evaluator(state)
        if not result["evaluation"]["approved"]:
            raise VerificationError(f"independent check rejected the verdict: {result['evaluation']['issues']}")
        return result

    # =========================
    # GRAPH
    # =========================
    graph = StateGraph(DecisionState)

    graph.add_node("ideals", ideals_node)
    graph.add_node("router", router_node)
    graph.add_node("not_block", not_block_node)
    graph.add_node("arith_search", arith_search_node)
    graph.add_node("conjugate", conjugate_node)
    graph.add_node("two_block", two_block_node)
    graph.add_node("evaluator", evaluator_node)

    graph.set_entry_point("ideals")
    graph.add_edge("ideals", "router")

    graph.add_conditional_edges(
        "router",
        lambda s: s["route"],
        {"not_block": "not_block", "arith_search": "arith_search"},
    )
    graph.add_conditional_edges(
        "arith_search",
        lambda s: s["route"],
        {"conjugate": "conjugate", "two_block": "two_block"},
    )

    graph.add_edge("not_block", "evaluator")
    graph.add_edge("conjugate", "evaluator")
    graph.add_edge("two_block", "evaluator")
    graph.add_edge("evaluator", END)

    return graph.compile()


@lru_cache(maxsize=1)
def decision_app():
    return build_decision_graph()


def run_decision(A: Automorphism, B: Automorphism, bound: int, seed: int) -> Trichotomy:
    final = decision_app().invoke({"A": A, "B": B, "bound": bound, "seed": seed, "searched": False})
    return Trichotomy(final["verdict"], bound)
