import os
import sys

# make the shared oracles importable regardless of the invocation directory
sys.path.insert(0, os.path.dirname(__file__))
