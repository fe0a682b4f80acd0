"""Configuration du package CT Workbench."""

from pathlib import Path

from setuptools import find_packages, setup

# Lire le README pour la description longue
readme_file = Path(__file__).parent / "README.md"
long_description = ""
if readme_file.exists():
    with open(readme_file, "r", encoding="utf-8") as fh:
        long_description = fh.read()

setup(
    name="ct-workbench",
    version="0.1.0",
    author="Équipe CT Workbench",
    description="Atelier de construction et de vérification pour les théories de vérité avec indices",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    py_modules=["app"],
    package_data={"": ["data/*.sexpr"]},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.13",
    ],
    python_requires=">=3.13",
    install_requires=[
        "pandas>=2.3.3",
        "pyparsing>=3.1.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require={
        "test": ["pytest>=8.4.2", "pytest-cov>=7.0.0", "hypothesis>=6.100.0"],
    },
    entry_points={
        "console_scripts": [
            "ctw=app:main",
        ],
    },
)
