"""Chain-condition analysis of the Todorcevic ordering over a linearly ordered tree."""
