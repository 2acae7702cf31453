#!/usr/bin/env python3
"""
Quick start script: checks the environment, then runs the bundled examples
"""
import sys
import subprocess
from pathlib import Path

EXAMPLES = [
    ["classify", "--algebra", "specs/m2z2.spec"],
    ["classify", "--algebra", "specs/m3z3.spec"],
    ["classify", "--algebra", "specs/m3z3.spec", "--conductor", "3"],
    ["classify", "--algebra", "specs/m2z4.spec"],
    ["check-central", "--algebra", "specs/m11e.spec", "x1[1]^2*x2[1]^2"],
    ["eval", "--algebra", "specs/m2z2.spec", "x1[g]*x2[g]", "--at", "x1=E12,x2=E21"],
]


def check_env_file():
    """The .env file is optional; defaults apply without it"""
    if not Path(".env").exists():
        print("ℹ️  No .env file, using defaults (see .env.example)")
        return True
    print("✅ .env file found")
    return True


def check_dependencies():
    """Check if required dependencies are installed"""
    # Map package names to their import names
    required_modules = {
        'loguru': 'loguru',
        'pydantic': 'pydantic',
        'python-dotenv': 'dotenv',
        'aiosqlite': 'aiosqlite',
        'sympy': 'sympy',
    }

    missing = []
    for package, module in required_modules.items():
        try:
            __import__(module)
        except ImportError:
            missing.append(package)

    if missing:
        print(f"❌ Missing dependencies: {', '.join(missing)}")
        print("Run: pip install -r requirements.txt")
        return False

    print("✅ All dependencies installed")
    return True


def main():
    """Main startup function"""
    print("🚀 gradedpi examples")
    print("=" * 50)

    if not check_env_file() or not check_dependencies():
        return 1

    worst = 0
    try:
        for example in EXAMPLES:
            print(f"\n$ python main.py {' '.join(example)}")
            result = subprocess.run([sys.executable, "main.py", *example], cwd=Path(__file__).parent)
            worst = max(worst, result.returncode)
    except KeyboardInterrupt:
        print("\n👋 Interrupted by user")
        return 0
    return worst


if __name__ == "__main__":
    sys.exit(main())
