"""Parallel evaluation corpus: originals, system outputs and references."""

from typing import List, Optional, Sequence

from pydantic import BaseModel, model_validator

from services.errors import InvalidArgumentError


def check_parallel(
    originals: Optional[Sequence[str]] = None,
    outputs: Optional[Sequence[str]] = None,
    references: Optional[Sequence[Sequence[str]]] = None,
) -> int:
    """Validate that all given sequences have the same non-zero length.

    References are R parallel lists, each as long as the originals.

    Returns:
        The shared corpus length

    Raises:
        InvalidArgumentError: On an empty corpus or any length mismatch
    """
    lengths = {}
    if originals is not None:
        lengths["originals"] = len(originals)
    if outputs is not None:
        lengths["outputs"] = len(outputs)
    if references is not None:
        if len(references) == 0:
            raise InvalidArgumentError("At least one reference set is required")
        for index, reference_set in enumerate(references):
            lengths[f"references[{index}]"] = len(reference_set)

    if not lengths:
        raise InvalidArgumentError("Nothing to evaluate")

    sizes = set(lengths.values())
    if len(sizes) > 1:
        detail = ", ".join(f"{name}={size}" for name, size in lengths.items())
        raise InvalidArgumentError(f"Corpus length mismatch: {detail}")

    size = sizes.pop()
    if size == 0:
        raise InvalidArgumentError("Corpus is empty")
    return size


class EvalCorpus(BaseModel):
    """Originals, optional system outputs and R parallel reference lists.

    A reference line may hold several sentences (1-to-N instances).
    """
    originals: List[str]
    outputs: Optional[List[str]] = None
    references: List[List[str]]

    @model_validator(mode="after")
    def _check_shapes(self) -> "EvalCorpus":
        check_parallel(self.originals, self.outputs, self.references)
        return self

    def __len__(self) -> int:
        return len(self.originals)

    @property
    def reference_count(self) -> int:
        return len(self.references)

    def references_for(self, index: int) -> List[str]:
        """All references of one instance."""
        return [reference_set[index] for reference_set in self.references]

    def with_outputs(self, outputs: Sequence[str]) -> "EvalCorpus":
        """Copy of this corpus with system outputs attached."""
        return EvalCorpus(originals=self.originals, outputs=list(outputs), references=self.references)

    def require_outputs(self) -> List[str]:
        if self.outputs is None:
            raise InvalidArgumentError("Corpus has no system outputs")
        return self.outputs
