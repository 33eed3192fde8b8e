"""Spawns a long-lived grandchild, records its pid, then hangs."""
import subprocess
import sys
import time

child = subprocess.Popen([sys.executable, "-c", "import time; time.sleep(60)"])
with open(sys.argv[1], "w") as fh:
    fh.write(str(child.pid))
time.sleep(60)
