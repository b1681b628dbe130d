import os
from codecs import open as codecs_open
from setuptools import setup, find_packages

from floerveer import __version__

# Get the long description from the relevant file
with codecs_open("README.md", encoding="utf-8") as f:
    long_description = f.read()


def read(fname):
    return open(os.path.join(os.path.dirname(__file__), fname)).read()


setup(
    name="floerveer",
    version=__version__,
    description="Heegaard diagrams, states and polynomial invariants of veering branched surfaces",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[],
    keywords="veering triangulation, branched surface, Heegaard Floer, taut polynomial",
    license="0BSD",
    packages=find_packages(exclude=["ez_setup", "examples", "tests"]),
    python_requires=">=3.9",
    install_requires=[
        "numpy",
        "jsonschema~=3.0",
        "jsonseq~=1.0",
        "python-dotenv",
        "sympy",
        "scipy",
        "networkx",
    ],
    include_package_data=True,
    package_data={"floerveer": ["data/*.json", "schemas/*.json"]},
    zip_safe=False,
    extras_require={
        "test": [
            "pytest",
            "hypothesis",
        ],
    },
    entry_points={
        "console_scripts": [
            "floerveer=floerveer.scripts.floerveer_cli:main",
        ],
    },
)
