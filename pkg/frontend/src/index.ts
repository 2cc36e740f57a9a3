export * from './types'
export * from './api'
export * from './modeControl'
export * from './activityView'
export * from './editorView'
