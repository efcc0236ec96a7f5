import sys


def main():
    from .main import main as main_func
    sys.exit(main_func())


def sweep():
    """`psiapprox-sweep ...` is `psiapprox sweep ...`"""
    from .main import main as main_func
    sys.exit(main_func(["sweep", *sys.argv[1:]]))


def check():
    from .main import main as main_func
    sys.exit(main_func(["check", *sys.argv[1:]]))


if __name__ == "__main__":
    main()
