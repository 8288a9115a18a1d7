import logging

logger = logging.getLogger(__name__)


class DecisionPolicy:
    """
    Router for the decide workflow.
    Picks the next stage from what the state already knows.

    Routes:
    - not_block → ideals not weakly equivalent (exact, final)
    - arith_search → weakly equivalent, conjugacy not yet searched
    - conjugate → the bounded search found a conjugating matrix
    - two_block → search exhausted; two-block certificates only
    """

    def __init__(self, debug=False):
        self.debug = debug

    def route(self, state: dict) -> str:
        if not state.get("weakly_equivalent"):
            label = "not_block"
        elif not state.get("searched"):
            label = "arith_search"
        elif state.get("witness") is not None:
            label = "conjugate"
        else:
            label = "two_block"

        if self.debug:
            logger.debug("[DecisionPolicy] → %s", label)
        return label
