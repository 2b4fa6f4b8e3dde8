from setuptools import setup, find_packages

setup(
    name="triality",
    version="0.1.0",
    packages=find_packages(exclude=["examples", "examples.*"]),
    package_data={"triality.models": ["report.schema.json"]},
    install_requires=[
        "pydantic>=2.5",
        "python-dotenv>=1.0.0",
        "numpy>=1.24",
        "sympy>=1.12",
    ],
    extras_require={"test": ["pytest>=7.4"]},
    entry_points={"console_scripts": ["triality=triality.app:main"]},
    python_requires=">=3.9",
)
