from setuptools import setup, find_packages

setup(
    name="rslab",
    version="0.1.0",
    description="Numerical lab for the time-fractional Rayleigh-Stokes problem",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    include_package_data=True,
    zip_safe=False,
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "pandas>=2.0.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require={
        "dev": ["pytest>=7.0.0", "pytest-cov>=4.0.0"],
    },
    entry_points={
        "console_scripts": [
            "rslab=rslab.cli.__main__:main",
        ],
    },
)
