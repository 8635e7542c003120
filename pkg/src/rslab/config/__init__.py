from .schema import CHECK_FAMILIES, KEYS, Key, Modes
from .loader import RunConfig, default_config, load_config, parse_config

__all__ = [
	"CHECK_FAMILIES",
	"KEYS",
	"Key",
	"Modes",
	"RunConfig",
	"default_config",
	"load_config",
	"parse_config",
]
