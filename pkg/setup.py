from setuptools import setup, find_packages
import neurogeom.__init__ as ng
import os

def read(fname):
    return open(os.path.join(os.path.dirname(__file__), fname)).read()

setup(
    name="neurogeom",
    version=ng.__version__,
    description="Validated geometry from binary medical-image volumes: volumetry, topology correction, isosurfaces, landmark registration, surface morphometry and diffusion tensor measures",
    long_description=read("README.md"),
    long_description_content_type='text/markdown',
    author=ng.__author__,
    author_email=ng.__email__,
    license="GPL-3.0 license",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    install_requires=["scipy",
                      "numpy",
                      "torch",
                      "tqdm",
                      "nibabel",
                      "scikit-image",
                      ],
    entry_points = {
        'console_scripts': [
            'neurogeom = neurogeom:run_from_terminal',
        ],
    },
    classifiers=[
        "Development Status :: 1 - Planning",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Programming Language :: Python :: 3",
    ],
)
