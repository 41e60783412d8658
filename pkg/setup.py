"""
Script de configuración inicial para Nanoshuttle
Crea directorios necesarios y verifica la configuración
"""

import sys
from pathlib import Path


def create_directory_structure():
    """Crea los directorios de logs y exportaciones"""

    base_dir = Path(__file__).parent
    directories = ["logs", "exports"]

    print("🔧 Configurando Nanoshuttle...")
    print("=" * 50)

    for directory in directories:
        dir_path = base_dir / directory
        if not dir_path.exists():
            dir_path.mkdir(parents=True, exist_ok=True)
            print(f"✅ Creado: {directory}/")
        else:
            print(f"✓ Existe: {directory}/")

    print("=" * 50)

    env_file = base_dir / ".env"
    env_example = base_dir / ".env.example"
    if not env_file.exists():
        print("\n⚠️  ADVERTENCIA: No se encontró archivo .env")
        if env_example.exists():
            print(f"   Copia {env_example.name} a .env si necesitas cambiar logs, semilla o rutas")
    else:
        print("\n✓ Archivo .env encontrado")

    device = base_dir / "nanoshuttle" / "config" / "device.ini"
    print(f"{'✓' if device.exists() else '⚠️ '} Dispositivo por defecto: {device.relative_to(base_dir)}")

    print("\n🚀 ¡Listo!")
    print("   Ejecuta: python -m nanoshuttle constants")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        # Invoked by pip/setuptools (e.g. egg_info); metadata lives in pyproject.toml
        from setuptools import setup

        setup()
    else:
        create_directory_structure()
