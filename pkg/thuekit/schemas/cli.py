# thuekit/schemas/cli.py
from pydantic import BaseModel, Field
from typing import List, Optional
from enum import IntEnum


class ExitCode(IntEnum):
    OK = 0
    FAILED = 1
    USAGE = 2


class CommandResult(BaseModel):
    exit_code: ExitCode = ExitCode.OK
    stdout: List[str] = Field(default_factory=list)
    csv_path: Optional[str] = None
