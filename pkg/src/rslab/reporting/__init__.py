# Writers and readers for run outputs
from .tables import (
	FLOAT_FORMAT,
	decay_frame,
	evolution_frame,
	read_csv,
	relaxation_frame,
	sweep_frame,
	write_csv,
)
from .jsonio import SCHEMA_VERSION, build_payload, read_json, write_json
from .fields import read_field_binary, snapshot_name, write_field_binary
from .provenance import PROVENANCE_NAME, ProvenanceRecord, build_provenance, file_digest, write_provenance

__all__ = [
	"FLOAT_FORMAT",
	"decay_frame",
	"evolution_frame",
	"read_csv",
	"relaxation_frame",
	"sweep_frame",
	"write_csv",
	"SCHEMA_VERSION",
	"build_payload",
	"read_json",
	"write_json",
	"read_field_binary",
	"snapshot_name",
	"write_field_binary",
	"PROVENANCE_NAME",
	"ProvenanceRecord",
	"build_provenance",
	"file_digest",
	"write_provenance",
]
