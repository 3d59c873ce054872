"""CMake-driven build of the pybind11 extension for setuptools installs."""

import pathlib
import shutil
import subprocess
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

ROOT = pathlib.Path(__file__).resolve().parent


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuildExt(build_ext):
    def build_extension(self, ext):
        out_path = pathlib.Path(self.get_ext_fullpath(ext.name)).resolve()
        build_dir = ROOT / "build" / "pip"
        build_dir.mkdir(parents=True, exist_ok=True)
        subprocess.check_call(
            [
                "cmake",
                "-S", str(ROOT),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DFAIRRL_BUILD_PYTHON=ON",
                "-DSKBUILD=ON",  # skip the test tree for package builds
                f"-DPYTHON_EXECUTABLE={sys.executable}",
            ]
        )
        subprocess.check_call(
            ["cmake", "--build", str(build_dir), "--target", "_core"]
        )
        built = next((build_dir / "python" / "fairrl").glob("_core*.so"))
        out_path.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built, out_path)


setup(
    ext_modules=[CMakeExtension("fairrl._core")],
    cmdclass={"build_ext": CMakeBuildExt},
)
