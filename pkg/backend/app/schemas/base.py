"""
Document base: JSON files written and read by the toolkit.
"""

import json
import logging
from pathlib import Path
from typing import ClassVar, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from app.core.exceptions import ArtifactNotFoundError, BlimpError, ConfigurationError

logger = logging.getLogger(__name__)

D = TypeVar("D", bound="Document")


class Record(BaseModel):
    """
    Strict model whose floats serialize in shortest round-trip form and
    infinities as `Infinity`, so a save/load cycle is bit-exact.
    """
    model_config = ConfigDict(extra="forbid", ser_json_inf_nan="constants")


class Document(Record):
    """Base for persisted documents."""

    # Label used in "not found" diagnostics
    ARTIFACT: ClassVar[str] = "document"
    # Raised for unreadable or invalid content
    INVALID_ERROR: ClassVar[Type[BlimpError]] = ConfigurationError

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.debug(f"Wrote {self.ARTIFACT} {path}")
        return path

    @classmethod
    def load(cls: Type[D], path: Union[str, Path]) -> D:
        path = Path(path)
        if not path.is_file():
            raise ArtifactNotFoundError(cls.ARTIFACT, path)
        try:
            # stdlib json accepts Infinity/NaN literals
            raw = json.loads(path.read_text(encoding="utf-8"))
            return cls.model_validate(raw)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise cls.INVALID_ERROR(f"{cls.ARTIFACT} file '{path}' is not valid JSON: {e}", details={"path": str(path)}) from e
        except ValidationError as e:
            raise cls.INVALID_ERROR(
                f"{cls.ARTIFACT} file '{path}' is invalid: {e.error_count()} error(s), first: {e.errors()[0]['msg']}",
                details={"path": str(path)}
            ) from e
