"""VulnEx: organization-wide open-source vulnerability audit toolkit."""

from vulnex.model import Severity, classify_severity, severity_color

__version__ = "0.1.0"

__all__ = ["Severity", "classify_severity", "severity_color", "__version__"]
