"""Setup script for homcx."""

from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="homcx",
    version="0.1.0",
    description="Hom complexes of simplicial complexes, holonomy of projectivities and chromatic bounds",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    package_data={"homcx": ["data/*.json"]},
    install_requires=[
        "numpy>=1.23",
        "networkx>=3.0",
        "sympy>=1.11",
    ],
    entry_points={
        "console_scripts": [
            "homcx=homcx.cli:main",
        ],
    },
    python_requires=">=3.10",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
)
