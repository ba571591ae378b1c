"""Registry for external corpus metrics.

Scorers that need resources outside this package (for example a
structural-simplicity scorer backed by a semantic parser) are registered
by name and run over an EvalCorpus. A failing scorer never aborts the
evaluation: its value is left out and the error is kept as a diagnostic.
"""

import importlib
import logging
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from services.corpus import EvalCorpus
from services.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

Scorer = Callable[[EvalCorpus], float]


class MetricRegistry:
    """Named external scorers, evaluated in registration order."""

    def __init__(self):
        self._scorers: Dict[str, Scorer] = {}

    def register(self, name: str, scorer: Scorer) -> None:
        """Register a scorer under a unique name.

        Raises:
            InvalidArgumentError: If the name is empty or already taken
        """
        if not name:
            raise InvalidArgumentError("Metric name must be non-empty")
        if name in self._scorers:
            raise InvalidArgumentError(f"Metric '{name}' is already registered")
        self._scorers[name] = scorer
        logger.debug("Registered external metric %s", name)

    def names(self) -> List[str]:
        return list(self._scorers)

    def __contains__(self, name: str) -> bool:
        return name in self._scorers

    def evaluate(
        self,
        corpus: EvalCorpus,
        names: Optional[Iterable[str]] = None,
    ) -> Tuple[Dict[str, float], Dict[str, str]]:
        """Run scorers over the corpus.

        Args:
            corpus: Corpus with system outputs
            names: Subset of registered names to run, all when None

        Returns:
            (values by name, diagnostics by name for scorers that failed)
        """
        selected = self.names() if names is None else [n for n in self._scorers if n in set(names)]
        values: Dict[str, float] = {}
        diagnostics: Dict[str, str] = {}
        for name in selected:
            try:
                values[name] = float(self._scorers[name](corpus))
            except Exception as e:
                logger.warning("External metric %s failed: %s", name, e)
                diagnostics[name] = f"{type(e).__name__}: {e}"
        return values, diagnostics


def load_scorer(spec: str) -> Scorer:
    """Import a scorer from a "module:function" path.

    Raises:
        InvalidArgumentError: If the path is malformed or does not resolve to a callable
    """
    module_name, sep, attribute = spec.partition(":")
    if not sep or not module_name or not attribute:
        raise InvalidArgumentError(f"Expected 'module:function', got '{spec}'")
    try:
        module = importlib.import_module(module_name)
    except ImportError as e:
        raise InvalidArgumentError(f"Cannot import scorer module '{module_name}': {e}") from e
    scorer = getattr(module, attribute, None)
    if not callable(scorer):
        raise InvalidArgumentError(f"'{spec}' is not a callable scorer")
    return scorer


# Singleton instance
_metric_registry: Optional[MetricRegistry] = None


def get_metric_registry() -> MetricRegistry:
    """Get the singleton MetricRegistry instance."""
    global _metric_registry
    if _metric_registry is None:
        _metric_registry = MetricRegistry()
    return _metric_registry


def register_external_metric(name: str, scorer: Scorer) -> None:
    """Register a scorer with the shared registry."""
    get_metric_registry().register(name, scorer)


def evaluate_extras(
    corpus: EvalCorpus,
    names: Optional[Iterable[str]] = None,
) -> Tuple[Dict[str, float], Dict[str, str]]:
    """Run the shared registry's scorers over the corpus."""
    return get_metric_registry().evaluate(corpus, names)
