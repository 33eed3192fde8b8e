import sys

print(f"checking {sys.argv[1]}")
print("VERIFICATION FAILED")
