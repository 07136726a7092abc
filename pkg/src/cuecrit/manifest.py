"""Run manifests: the parameter record sealed next to every output file.

A manifest's identity is its command, full parameter set and artifact
version; two runs with the same identity must produce byte-identical data
files. Wall-clock duration is recorded for the log but excluded from the
identity, since it varies run to run.
"""
import json
from dataclasses import dataclass

ARTIFACT_VERSION = "1"


@dataclass(frozen=True)
class RunManifest:
    command: str
    parameters: dict
    artifact_version: str = ARTIFACT_VERSION
    duration_seconds: float = 0.0

    def identity(self):
        """The fields that determine output bytes."""
        return {
            "command": self.command,
            "parameters": dict(self.parameters),
            "artifact_version": self.artifact_version,
        }

    def to_json(self):
        payload = self.identity()
        payload["duration_seconds"] = self.duration_seconds
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        payload = json.loads(text)
        return cls(command=payload["command"],
                   parameters=payload["parameters"],
                   artifact_version=payload["artifact_version"],
                   duration_seconds=payload.get("duration_seconds", 0.0))

    def write(self, path):
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.to_json())


def read_manifest(path):
    with open(path, "r", encoding="ascii") as fh:
        return RunManifest.from_json(fh.read())
