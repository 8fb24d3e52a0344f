from combdesign.catalog import register_builtin_types

register_builtin_types()
