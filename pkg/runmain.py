import sys

import dsdirac

sys.exit(dsdirac.main('verify', '-v'))
